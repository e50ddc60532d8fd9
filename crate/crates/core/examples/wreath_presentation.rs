//! Symplectic reflections of Gamma_N and the check that the kappa-form
//! definition agrees with the explicit commutation relations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wsra::gamma::{make_cyclic, ClassFunction};
use wsra::linalg::c64;
use wsra::wreath::{group_order, presentation_check, symplectic_reflections, ParamPoint, ReflectionKind};

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in [2, 3] {
        for l in [2, 3, 4] {
            let g = make_cyclic(l);
            let census = symplectic_reflections(n, &g);
            let mut z = || c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let p = ParamPoint::new(z(), ClassFunction::from_classes(&g, |_| z()));
            let ok = presentation_check(n, &g, &p).is_ok();
            println!(
                "N={n} Z/{l}: |Gamma_N| = {:>4}, {} S-type + {} Gamma-type reflections in {} classes, presentation {}",
                group_order(n, &g),
                census.count(ReflectionKind::S),
                census.count(ReflectionKind::Gamma),
                census.classes.len(),
                if ok { "agrees" } else { "MISMATCH" }
            );
        }
    }
}
