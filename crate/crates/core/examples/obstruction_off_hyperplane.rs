//! Moving k alone leaves the hyperplane; the first-order obstruction equals
//! the directional derivative of the hyperplane function and continuation
//! stops at its first step.

use wsra::deform::{ContinuationStatus, DeformProblem};
use wsra::gamma::{make_cyclic, ClassFunction};
use wsra::hyperplane::HyperplaneSpec;
use wsra::linalg::{c64, C64};
use wsra::rank1::segment_rep;
use wsra::symgroup::Partition;
use wsra::wreath::build_m;

fn main() {
    let g = make_cyclic(3);
    let c = ClassFunction::from_classes(&g, |_| c64(-2.0, 0.0));
    let y = segment_rep(3, 0, 1, &c).unwrap();
    let w = Partition::new(vec![2]).unwrap();
    let spec = HyperplaneSpec::from_rep(&w, &y).unwrap();
    let problem = DeformProblem::new(build_m(&w, &y, 2).unwrap()).unwrap();

    for d in [
        vec![c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)],
        vec![c64(0.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0)],
        vec![c64(1.0, 0.0), c64(-1.5, 0.0), c64(-1.5, 0.0)],
    ] {
        let derivative: C64 = spec.gradient().iter().zip(&d).map(|(a, b)| a * b).sum();
        let o = problem.first_order_obstruction(&d).unwrap();
        let path = problem.continue_path(&d, 0.2, 10, 1e-8).unwrap();
        let outcome = match path.status {
            ContinuationStatus::Obstructed { step, magnitude, .. } => {
                format!("obstructed at step {step}, magnitude {magnitude:.6}")
            }
            ref s => s.label().to_string(),
        };
        println!(
            "direction {:?}: derivative {:.3}, obstruction {:.3} (unresolved {:.1e}); {outcome}",
            d.iter().map(|z| z.re).collect::<Vec<_>>(),
            derivative,
            o.value,
            o.unresolved_norm
        );
    }
}
