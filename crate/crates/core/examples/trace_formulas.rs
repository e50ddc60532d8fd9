//! Predicted traces of gamma_i and s_ij gamma_i gamma_j^-1 on M = W ⊗ Y^N
//! compared with the matrices.

use wsra::gamma::{make_cyclic, ClassFunction};
use wsra::hyperplane::trace_formulas;
use wsra::rank1::segment_rep_unchecked;
use wsra::symgroup::partitions_of;
use wsra::wreath::{build_m, WreathElement};

fn main() {
    let g = make_cyclic(3);
    let y = segment_rep_unchecked(3, 0, 1, &ClassFunction::zero(&g)).unwrap();
    let n = 3;
    for w in partitions_of(n) {
        let rep = build_m(&w, &y, n).unwrap();
        println!("W = ({w}), dim M = {}", rep.dim_m);
        for e in 0..g.order() {
            let pred = trace_formulas(&w, &y, n, g.class_of[e]);
            let gi = rep.element_matrix(&WreathElement::gamma_at(n, 0, e)).trace();
            let sg = rep.element_matrix(&WreathElement::s_gamma(&g, n, 0, 1, e)).trace();
            println!(
                "  gamma #{e}: tr(gamma_1) = {:.3} (predicted {:.3}), tr(s_12 gamma_1 gamma_2^-1) = {:.3} (predicted {:.3}{})",
                gi,
                pred.gamma_i,
                sg,
                pred.s_gamma,
                pred.s_gamma_rectangle.map_or(String::new(), |r| format!(", rectangle formula {:.3}", r))
            );
        }
    }
}
