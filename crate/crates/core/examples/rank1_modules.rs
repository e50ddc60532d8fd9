//! Segment modules over Z/l: which segments are feasible for a given c, and
//! the projection of c onto the sum condition.

use wsra::gamma::{make_cyclic, ClassFunction};
use wsra::linalg::c64;
use wsra::rank1::{project_to_feasible, rank1_residuals, segment_lambdas, segment_rep};

fn main() {
    let l = 4;
    let g = make_cyclic(l);
    let c = ClassFunction::from_classes(&g, |k| c64(0.3 * k as f64, -0.2));
    for (a, b) in [(0, 0), (0, 1), (1, 3), (0, 3)] {
        print!("[{a},{b}] at c: ");
        match segment_rep(l, a, b, &c) {
            Ok(y) => println!("feasible, residual {:.1e}", rank1_residuals(&y).max()),
            Err(e) => println!("{e}"),
        }
        if let Some(fixed) = project_to_feasible(l, a, b, &c) {
            let y = segment_rep(l, a, b, &fixed).expect("projected c satisfies the sum condition");
            let lambdas = segment_lambdas(&g, a, b, &fixed);
            println!(
                "  projected: dim {}, residual {:.1e}, commutant {}, sum of weights {:.1e}",
                y.dim,
                rank1_residuals(&y).max(),
                y.commutant_dim(),
                lambdas.iter().sum::<wsra::linalg::C64>().norm()
            );
        }
    }
}
