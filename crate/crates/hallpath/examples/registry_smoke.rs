use hallpath::checker::{run_registry, CheckConfig};
use hallpath::RatFunc;
fn main() {
    let cfg = CheckConfig::default();
    let t0 = std::time::Instant::now();
    let out = run_registry::<RatFunc>(&cfg, &[]);
    let mut npass = 0; let mut nskip = 0; let mut nfail = 0;
    for r in &out.reports {
        match &r.status {
            hallpath::checker::Status::Pass => npass += 1,
            hallpath::checker::Status::Skipped{..} => nskip += 1,
            hallpath::checker::Status::Fail{witness} => { nfail += 1; println!("FAIL {} {} :: {}", r.id, r.params, witness); }
        }
    }
    println!("pass={npass} skip={nskip} fail={nfail} signs=({},{}) elapsed={:?}", out.sign_e, out.sign_f, t0.elapsed());
}
