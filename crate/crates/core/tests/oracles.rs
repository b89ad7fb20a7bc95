//! Bounds re-evaluated from their formulas with nothing but the direct
//! commutator-trace route, compared with the library's kernel-based search.

use skewinfo::bounds::{
    channel_bounds, observable_bounds, permutations, unitary_bounds, BoundName, ChannelBoundOptions, RenAggregation,
};
use skewinfo::scenarios::{damping_channels, pauli_observables, pauli_rotations};
use skewinfo::{equatorial_state, wyd_direct, ComplexMatrix, MCFunction, QuantumState};

const TOL: f64 = 1e-10;

fn wyd(rho: &QuantumState, x: &ComplexMatrix, alpha: f64) -> f64 {
    wyd_direct(rho, x, alpha).unwrap().value()
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|s| ((s + 1)..n).map(move |t| (s, t))).collect()
}

/// THM1 bracket for branch x on values I(a_s ± a_t).
fn thm1_formula(plus: &[f64], minus: &[f64], n: f64, x: u8) -> f64 {
    let (root, plain) = if x == 0 { (plus, minus) } else { (minus, plus) };
    let r: f64 = root.iter().map(|v| v.sqrt()).sum();
    let p: f64 = plain.iter().sum();
    (2.0 / (n * (n - 1.0)) * r * r + p) / (2.0 * n - 2.0)
}

fn ren_formula(total: f64, minus: &[f64], n: f64) -> f64 {
    let r: f64 = minus.iter().map(|v| v.sqrt()).sum();
    total / n + 2.0 / (n * n * (n - 1.0)) * r * r
}

fn lb1_formula(plus: &[f64], n: f64) -> f64 {
    let r: f64 = plus.iter().map(|v| v.sqrt()).sum();
    let p: f64 = plus.iter().sum();
    (p - r * r / ((n - 1.0) * (n - 1.0))) / (n - 2.0)
}

#[test]
fn example1_theta0_from_scratch() {
    let alpha = 1.0 / 3.0;
    let rho = equatorial_state(3f64.sqrt() / 2.0, 0.0).unwrap();
    let obs = pauli_observables();
    let m: Vec<&ComplexMatrix> = obs.iter().map(|o| o.matrix()).collect();
    let ps = pairs(3);
    let plus: Vec<f64> = ps.iter().map(|&(s, t)| wyd(&rho, &(m[s] + m[t]), alpha)).collect();
    let minus: Vec<f64> = ps.iter().map(|&(s, t)| wyd(&rho, &(m[s] - m[t]), alpha)).collect();
    let total = wyd(&rho, &(&(m[0] + m[1]) + m[2]), alpha);
    let lhs: f64 = m.iter().map(|a| wyd(&rho, a, alpha)).sum();
    let thm1 = thm1_formula(&plus, &minus, 3.0, 0).max(thm1_formula(&plus, &minus, 3.0, 1));
    let ren = ren_formula(total, &minus, 3.0);

    let r = observable_bounds(&rho, &obs, &MCFunction::wyd(alpha).unwrap()).unwrap();
    assert!((r.lhs_sum - lhs).abs() < TOL);
    assert!((r.value(BoundName::Thm1).unwrap() - thm1).abs() < TOL);
    assert!((r.value(BoundName::RenObs).unwrap() - ren).abs() < TOL);
    assert!(thm1 > ren);
}

/// Skew of K^s_{π_s(i)} ± K^t_{π_t(i)}, summed over i unless one index is given.
#[allow(clippy::too_many_arguments)]
fn channel_pair(
    rho: &QuantumState,
    k: &[Vec<ComplexMatrix>],
    p: &[Vec<usize>],
    s: usize,
    t: usize,
    sign: f64,
    alpha: f64,
    i: Option<usize>,
) -> f64 {
    let n = k[0].len();
    let idx: Vec<usize> = match i {
        Some(i) => vec![i],
        None => (0..n).collect(),
    };
    idx.iter().map(|&i| wyd(rho, &(&k[s][p[s][i]] + &k[t][p[t][i]].scale_real(sign)), alpha)).sum()
}

#[test]
fn example2_full_search_matches_reduced_search() {
    let alpha = 1.0 / 3.0;
    for (theta, q) in [(0.7, 0.5), (0.0, 0.1), (2.0, 0.3)] {
        let rho = equatorial_state(3f64.sqrt() / 2.0, theta).unwrap();
        let chans = damping_channels(q).unwrap();
        let k: Vec<Vec<ComplexMatrix>> = chans.iter().map(|c| c.kraus().to_vec()).collect();
        let n = 2;
        let perms = permutations(n);
        let ps = pairs(3);
        let (mut lb1, mut lb2, mut lb3, mut ren1, mut ren2) = (f64::MIN, f64::MIN, f64::MIN, f64::MIN, f64::MIN);
        // every assignment, first channel included
        for a in &perms {
            for b in &perms {
                for c in &perms {
                    let p = vec![a.clone(), b.clone(), c.clone()];
                    let plus: Vec<f64> =
                        ps.iter().map(|&(s, t)| channel_pair(&rho, &k, &p, s, t, 1.0, alpha, None)).collect();
                    let minus: Vec<f64> =
                        ps.iter().map(|&(s, t)| channel_pair(&rho, &k, &p, s, t, -1.0, alpha, None)).collect();
                    let total_at = |i: usize| wyd(&rho, &(&(&k[0][p[0][i]] + &k[1][p[1][i]]) + &k[2][p[2][i]]), alpha);
                    let total: f64 = (0..n).map(total_at).sum();
                    lb1 = lb1.max(lb1_formula(&plus, 3.0));
                    lb2 = lb2.max(ren_formula(total, &minus, 3.0));
                    // LB3 swaps the roles of the two branches relative to THM1
                    lb3 = lb3.max(thm1_formula(&plus, &minus, 3.0, 1).max(thm1_formula(&plus, &minus, 3.0, 0)));
                    let (mut r1, mut r2) = (0.0, 0.0);
                    for i in 0..n {
                        let pl: Vec<f64> =
                            ps.iter().map(|&(s, t)| channel_pair(&rho, &k, &p, s, t, 1.0, alpha, Some(i))).collect();
                        let mi: Vec<f64> =
                            ps.iter().map(|&(s, t)| channel_pair(&rho, &k, &p, s, t, -1.0, alpha, Some(i))).collect();
                        r1 += lb1_formula(&pl, 3.0);
                        r2 += ren_formula(total_at(i), &mi, 3.0);
                    }
                    ren1 = ren1.max(r1);
                    ren2 = ren2.max(r2);
                }
            }
        }
        let opts = ChannelBoundOptions { ren_aggregation: RenAggregation::PerIndex, ..Default::default() };
        let r = channel_bounds(&rho, &chans, &MCFunction::wyd(alpha).unwrap(), &opts).unwrap();
        for (name, want) in [
            (BoundName::Lb1, lb1),
            (BoundName::Lb2, lb2),
            (BoundName::Lb3, lb3),
            (BoundName::RenCh1, ren1),
            (BoundName::RenCh2, ren2),
        ] {
            let got = r.value(name).unwrap();
            assert!((got - want).abs() < TOL, "{name} at θ={theta}, q={q}: {got} vs {want}");
        }
        let lhs: f64 = k.iter().flatten().map(|m| wyd(&rho, m, alpha)).sum();
        assert!((r.lhs_sum - lhs).abs() < TOL);
    }
}

#[test]
fn example3_from_scratch() {
    let alpha = 0.25;
    let us = pauli_rotations();
    let m: Vec<&ComplexMatrix> = us.iter().map(|u| u.matrix()).collect();
    let ps = pairs(3);
    for theta in [0.0, 1.1, 4.0] {
        let rho = equatorial_state(std::f64::consts::FRAC_1_SQRT_2, theta).unwrap();
        let plus: Vec<f64> = ps.iter().map(|&(s, t)| wyd(&rho, &(m[s] + m[t]), alpha)).collect();
        let minus: Vec<f64> = ps.iter().map(|&(s, t)| wyd(&rho, &(m[s] - m[t]), alpha)).collect();
        let total = wyd(&rho, &(&(m[0] + m[1]) + m[2]), alpha);
        let r = unitary_bounds(&rho, &us, &MCFunction::wyd(alpha).unwrap()).unwrap();
        assert!((r.value(BoundName::Lb1u).unwrap() - lb1_formula(&plus, 3.0)).abs() < TOL);
        assert!((r.value(BoundName::Lb2u).unwrap() - ren_formula(total, &minus, 3.0)).abs() < TOL);
        let lb3 = thm1_formula(&plus, &minus, 3.0, 0).max(thm1_formula(&plus, &minus, 3.0, 1));
        assert!((r.value(BoundName::Lb3u).unwrap() - lb3).abs() < TOL);
        let lhs: f64 = m.iter().map(|u| wyd(&rho, u, alpha)).sum();
        assert!((r.lhs_sum - lhs).abs() < TOL);
    }
}

#[test]
fn documented_values() {
    use skewinfo::{bloch_state, pauli_x, pauli_y, pauli_z, skew_observable, variance, Observable};
    // pure |0⟩, σx: skew equals the variance, 1
    let up = bloch_state([0.0, 0.0, 1.0]).unwrap();
    let sx = Observable::new(pauli_x()).unwrap();
    assert!((skew_observable(&up, &sx, &MCFunction::wyd(1.0 / 3.0).unwrap()).unwrap().value() - 1.0).abs() < TOL);
    assert!((skew_observable(&up, &sx, &MCFunction::fisher()).unwrap().value() - 1.0).abs() < TOL);
    // I/2 has unit variance for σz and zero skew for everything
    let mixed = QuantumState::maximally_mixed(2);
    let sz = Observable::new(pauli_z()).unwrap();
    assert!((variance(&mixed, &sz).unwrap() - 1.0).abs() < 1e-15);
    assert!(skew_observable(&mixed, &sz, &MCFunction::fisher()).unwrap().value() < 1e-15);
    // Fisher of σy for r = (√3/2, 0, 0): ½(λ1−λ2)²/(λ1+λ2)·2|⟨1|σy|2⟩|² = r² = 3/4
    let s = bloch_state([3f64.sqrt() / 2.0, 0.0, 0.0]).unwrap();
    let sy = Observable::new(pauli_y()).unwrap();
    assert!((skew_observable(&s, &sy, &MCFunction::fisher()).unwrap().value() - 0.75).abs() < TOL);
}
