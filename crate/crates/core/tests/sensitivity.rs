use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use parity_metrology::states::tsb_coefficients;
use parity_metrology::{
    heisenberg_limit, optimal_sensitivity, sensitivity, RotationConfig, SearchGrid,
    SensitivityReport, TsbParams,
};

/// Largest |Δφ_opt / HL − 1| for the squeezed number state over r ∈ [0.5, 1.5].
const TMSN_CLOSENESS: f64 = 0.10;

fn optimum(params: TsbParams, ell: u32) -> SensitivityReport {
    let state = tsb_coefficients(params, 1e-12).unwrap();
    optimal_sensitivity(&state, ell, &SearchGrid::one_period(ell)).unwrap()
}

#[test]
fn squeezed_vacuum_beats_the_limit_at_r_one() {
    let rep = optimum(TsbParams::squeezed_vacuum(1.0).unwrap(), 1);
    let hl = 1.0 / (8.0 * 1f64.sinh().powi(2));
    assert!((rep.heisenberg_limit - hl).abs() < 1e-9 * hl);
    assert!((hl - 0.090_507_707_620_788_8).abs() < 1e-15);
    assert!(rep.delta_phi_opt < hl);
    assert!((rep.difference - 0.021_6).abs() < 1e-3, "{rep:?}");
}

#[test]
fn squeezed_number_tracks_the_limit() {
    let golden = [(0.5, 0.981_677), (1.0, 1.049_440), (1.5, 1.098_676)];
    for (r, ratio) in golden {
        let rep = optimum(TsbParams::squeezed_number(r).unwrap(), 1);
        assert!(
            (rep.delta_phi_opt / rep.heisenberg_limit - ratio).abs() < 1e-5,
            "r = {r}"
        );
    }
    for i in 0..=20 {
        let r = 0.5 + 0.05 * i as f64;
        let rep = optimum(TsbParams::squeezed_number(r).unwrap(), 1);
        assert!(
            (rep.delta_phi_opt / rep.heisenberg_limit - 1.0).abs() <= TMSN_CLOSENESS,
            "r = {r}"
        );
    }
}

#[test]
fn larger_delta_improves_the_optimum_at_r_one() {
    let quarter = optimum(TsbParams::new(1.0, FRAC_PI_4).unwrap(), 1);
    let half = optimum(TsbParams::new(1.0, FRAC_PI_2).unwrap(), 1);
    assert!(half.delta_phi_opt < quarter.delta_phi_opt);
}

#[test]
fn sensitivity_diverges_at_the_trough_and_is_finite_at_the_peak() {
    let state = tsb_coefficients(TsbParams::new(0.8, 0.3).unwrap(), 1e-12).unwrap();
    for ell in 0..4u32 {
        assert_eq!(
            sensitivity(&state, &RotationConfig::new(ell, 0.0)),
            f64::INFINITY
        );
        let peak = std::f64::consts::PI / (4.0 * (ell as f64 + 1.0));
        let rep = optimal_sensitivity(&state, ell, &SearchGrid::one_period(ell)).unwrap();
        for offset in [1e-4, 1e-6] {
            let s = sensitivity(&state, &RotationConfig::new(ell, peak - offset));
            assert!(
                (s - rep.delta_phi_opt).abs() < 1e-4 * rep.delta_phi_opt,
                "ℓ = {ell}: {s}"
            );
        }
    }
}

#[test]
fn limit_scales_with_orbital_number() {
    let n = 2.0 * 1f64.sinh().powi(2);
    let one = heisenberg_limit(n, 1).unwrap();
    let three = heisenberg_limit(n, 3).unwrap();
    assert!((three / one - 0.5).abs() < 1e-15);
    assert!(heisenberg_limit(0.0, 1).is_err());
}

#[test]
fn optimum_lies_near_a_peak_and_is_grid_independent() {
    let params = TsbParams::new(0.9, 0.4).unwrap();
    let coarse = {
        let state = tsb_coefficients(params, 1e-12).unwrap();
        optimal_sensitivity(&state, 2, &SearchGrid::periods(2, 2, 512)).unwrap()
    };
    let fine = optimum(params, 2);
    assert!((coarse.delta_phi_opt - fine.delta_phi_opt).abs() < 1e-9 * fine.delta_phi_opt);
}
