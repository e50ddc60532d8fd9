//! Cyclic and binary dihedral subgroups of SL(2, C): classes and the
//! orthogonality of their character tables.

use wsra::gamma::GammaSpec;

fn main() {
    for spec in ["cyclic:4", "binary_dihedral:2", "binary_dihedral:3"] {
        let g = spec.parse::<GammaSpec>().expect("valid spec").build();
        println!(
            "{spec}: order {}, {} classes, sizes {:?}",
            g.order(),
            g.num_classes(),
            g.class_sizes
        );
        // <chi_a, chi_b> = delta_ab
        let mut worst: f64 = 0.0;
        for (a, ra) in g.char_table.iter().enumerate() {
            for (b, rb) in g.char_table.iter().enumerate() {
                let ip: wsra::linalg::C64 = (0..g.num_classes())
                    .map(|k| ra[k] * rb[k].conj() * g.class_sizes[k] as f64)
                    .sum::<wsra::linalg::C64>()
                    / g.order() as f64;
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((ip - wsra::linalg::c64(target, 0.0)).norm());
            }
        }
        let dims: Vec<f64> = (0..g.num_classes()).map(|i| g.irrep_dim(i)).collect();
        println!("  irrep dims {dims:?}, orthogonality error {worst:.1e}");
    }
}
