//! Corners, reflection multiplicities and the operator s_12 + .. + s_1N
//! for every partition of N <= 6.

use wsra::linalg::Scalarity;
use wsra::symgroup::{c_operator, partitions_of, refl_hom_dim};

fn main() {
    println!(
        "{:<14} {:>4} {:>7} {:>8} {:>8}  C",
        "partition", "dim", "corners", "Hom(h)", "content"
    );
    for n in 1..=6 {
        for mu in partitions_of(n) {
            let c = match c_operator(&mu) {
                Scalarity::Scalar(v) => format!("scalar {v}"),
                Scalarity::NotScalar { .. } => "not scalar".to_string(),
            };
            println!(
                "{:<14} {:>4} {:>7} {:>8} {:>8}  {c}",
                mu.to_string(),
                mu.hook_dim(),
                mu.corners().len(),
                refl_hom_dim(&mu),
                mu.contents().total
            );
        }
    }
}
