use prabhakar::kernels::*;
use prabhakar::lapinv::*;
use prabhakar::config::EvalConfig;
use std::time::Instant;
fn main() {
    let c = EvalConfig::default();
    let (a, g, l) = (0.5, 0.5, 1.0);
    let kern = MemoryKernel::distributed_prabhakar(a, g, l, 1.0).unwrap();
    let f = make_partner_laplace(&kern);
    for t in [0.01, 0.5, 1.0, 2.0] {
        let ser = m2_time(a, g, l, t, M2Route::ExactSeries, &c).unwrap().value;
        let gs = ilt(&f, t, &IltConfig::default()).unwrap().value;
        println!("M2({t}): series {ser:.9} ilt {gs:.9} m1 {:.6}", m1_time(t).unwrap());
    }
    let t0 = Instant::now();
    let r = sonnine_residual(&kern, 1.0, &c).unwrap();
    println!("sonnine k2 t=1: {:?} residual {r:.2e}", t0.elapsed());
    let t0 = Instant::now();
    let r = sonnine_residual(&kern, 0.01, &c).unwrap();
    println!("sonnine k2 t=0.01: {:?} residual {r:.2e}", t0.elapsed());
    let t0 = Instant::now();
    let r = sonnine_residual(&kern, 10.0, &c).unwrap();
    println!("sonnine k2 t=10: {:?} residual {r:.2e}", t0.elapsed());
}
