//! Deforms the k = 0 representation of H(Gamma_2), Gamma = Z/3, W = (2),
//! Y = segment [0,1] at c = -2, along the hyperplane: power series to
//! order 4 and predictor-corrector continuation.

use wsra::deform::{unit_k_tangent, DeformProblem};
use wsra::gamma::{make_cyclic, ClassFunction};
use wsra::hyperplane::{hyp_value, HyperplaneSpec};
use wsra::linalg::{c64, max_norm};
use wsra::rank1::segment_rep;
use wsra::symgroup::Partition;
use wsra::wreath::{build_m, end_dim};

fn main() {
    let g = make_cyclic(3);
    let c = ClassFunction::from_classes(&g, |_| c64(-2.0, 0.0));
    let y = segment_rep(3, 0, 1, &c).unwrap();
    let w = Partition::new(vec![2]).unwrap();
    let rep = build_m(&w, &y, 2).unwrap();
    let spec = HyperplaneSpec::from_rep(&w, &y).unwrap();
    println!("dim M = {}, End = {}", rep.dim_m, end_dim(&rep).unwrap());

    let problem = DeformProblem::new(rep).unwrap();
    let d = unit_k_tangent(&spec).unwrap();
    let shown: Vec<String> = d.iter().map(|z| format!("{z:.3}")).collect();
    println!(
        "equivariant tuples: {}, direction (k, c_1, c_2) = ({})",
        problem.basis.dim,
        shown.join(", ")
    );

    let path = problem.continue_path(&d, 0.2, 10, 1e-8).unwrap();
    for st in &path.steps {
        println!(
            "step {:>2}: k = {:.2}, residual {:.1e}, Newton {}, gauge kernel {}, commutant {}, |hyp| {:.1e}",
            st.index,
            st.params.k.re,
            st.residual,
            st.newton_iterations,
            st.jacobian_kernel_dim,
            st.commutant_dim,
            hyp_value(&spec, &st.params).norm()
        );
    }
    println!("status: {}", path.status.label());

    let series = problem.series_solve(&d, 4).unwrap();
    for h in [0.2, 0.1, 0.05] {
        let fine = problem.continue_path(&d, h, 4, 1e-13).unwrap();
        let err = max_norm(&(series.evaluate(c64(h, 0.0)) - &fine.steps.last().unwrap().coeffs));
        println!("h = {h}: |series - continuation| = {err:.2e}");
    }
}
