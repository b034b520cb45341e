use hallpath::checker::*;
use hallpath::RatFunc;
use std::time::Instant;

fn main() {
    let cfg = CheckConfig::default();
    let t = Instant::now();
    let r = check_rewriter_random::<RatFunc>(&CheckConfig {
        random_words: 20,
        ..cfg.clone()
    });
    println!(
        "rewriter(20 words): {:?} -> {}",
        t.elapsed(),
        r.passed()
    );
    let t = Instant::now();
    let r = check_y_relation_2::<RatFunc>(1, &[0, -1, 1], &cfg);
    println!("y2 arity3: {:?} -> {:?}", t.elapsed(), r.status);
    let t = Instant::now();
    let r = check_y_relation_1::<RatFunc>(&[0, -1, 1], 1, &cfg);
    println!("y1 arity3: {:?} -> {:?}", t.elapsed(), r.status);
    let t = Instant::now();
    let out = check_theta::<RatFunc>(&cfg);
    println!("theta all: {:?} -> {} reports", t.elapsed(), out.len());
    let t = Instant::now();
    let r = check_ef_commutator::<RatFunc>(2, -1, -1, &cfg);
    println!("ef(2,-1): {:?} -> {:?}", t.elapsed(), r.status);
    let t = Instant::now();
    let r = check_eha_quadratic::<RatFunc>(false, 2, -2, &cfg);
    println!("quad e(2,-2): {:?} -> {:?}", t.elapsed(), r.status);
    let t = Instant::now();
    let (_, r) = check_ft_comparison::<RatFunc>(&cfg);
    println!("ft: {:?} -> {:?}", t.elapsed(), r.status);
    let t = Instant::now();
    let out = check_cubic::<RatFunc>(false, &cfg);
    println!("cubic e: {:?} -> {} reports", t.elapsed(), out.len());
}
