//! Seeded generators shared by the integration suites: rotations drawn
//! from the full group and SPD matrices with controlled eigenvalue
//! ranges and a guaranteed relative gap.

use nalgebra::Vector3;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use spdsr::matcore::so_exp;
use spdsr::{AntiSym, DiagMat, Rotation, SymMat};

pub fn random_rotation(rng: &mut ChaCha8Rng, p: usize) -> Rotation {
    if p == 2 {
        let t = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
        return so_exp(&AntiSym::Planar(t));
    }
    let axis = loop {
        let v = Vector3::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        if v.norm() > 1e-3 {
            break v / v.norm();
        }
    };
    let angle = rng.gen_range(0.0..std::f64::consts::PI - 0.05);
    so_exp(&AntiSym::Spatial(axis * angle))
}

/// Eigenvalues `exp(uniform(lo, hi))`, redrawn until every pairwise gap
/// exceeds `min_rel_gap` relative to the largest value.
pub fn random_eigs(
    rng: &mut ChaCha8Rng,
    p: usize,
    lo: f64,
    hi: f64,
    min_rel_gap: f64,
) -> Vec<f64> {
    loop {
        let vals: Vec<f64> = (0..p).map(|_| rng.gen_range(lo..hi).exp()).collect();
        let scale = vals.iter().cloned().fold(1.0f64, f64::max);
        let mut ok = true;
        for i in 0..p {
            for j in i + 1..p {
                if (vals[i] - vals[j]).abs() <= min_rel_gap * scale {
                    ok = false;
                }
            }
        }
        if ok {
            return vals;
        }
    }
}

pub fn spd_from(u: &Rotation, eigs: &[f64]) -> SymMat {
    let d = DiagMat::new(eigs.to_vec()).expect("positive eigenvalues");
    let m = u.matrix() * d.matrix() * u.matrix().transpose();
    SymMat::from_matrix(&m).expect("congruence of a diagonal is symmetric")
}

pub fn random_spd(rng: &mut ChaCha8Rng, p: usize) -> SymMat {
    let u = random_rotation(rng, p);
    let eigs = random_eigs(rng, p, -1.5, 1.8, 1e-3);
    spd_from(&u, &eigs)
}
