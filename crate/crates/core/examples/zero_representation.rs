//! W = (2,2) with the sign character of Z/2: x = y = 0 is a representation
//! exactly on the hyperplane, and off it R1 fails by |hyp_value|.

use std::sync::Arc;

use wsra::gamma::{make_cyclic, ClassFunction};
use wsra::hyperplane::{hyp_value, HyperplaneSpec};
use wsra::linalg::c64;
use wsra::rank1::RepY;
use wsra::symgroup::Partition;
use wsra::wreath::{build_m, wreath_residuals, ParamPoint};

fn main() {
    let z2 = Arc::new(make_cyclic(2));
    let c = |v: f64| ClassFunction::new([(1, c64(v, 0.0))].into());
    let y = RepY::one_dimensional(z2, 1, c(1.0)).expect("sign character at c = 1");
    let w = Partition::new(vec![2, 2]).unwrap();
    let rep = build_m(&w, &y, 4).unwrap();
    let spec = HyperplaneSpec::from_rep(&w, &y).unwrap();
    println!("dim M = {}", rep.dim_m);
    for (k, cv) in [(0.0, 1.0), (2.5, 1.0), (-1.0, 1.0), (0.7, 0.4), (1.0, 3.0)] {
        let p = ParamPoint::new(c64(k, 0.0), c(cv));
        let res = wreath_residuals(&rep, &p);
        println!(
            "k = {k:>4}, c = {cv}: |hyp| = {:.3}, R1 residual = {:.3}, R2 residual = {:.1e}",
            hyp_value(&spec, &p).norm(),
            res.r1().into_iter().fold(0.0, f64::max),
            res.r2_max()
        );
    }
}
