//! End-to-end fitting workflows: angular generalization, grid-search trace
//! semantics, hybrid table monotonicity, and the CSV output surfaces.

mod common;

use common::*;
use scatterkit::csvio;
use scatterkit::fitting::{
    evaluate_generalization, grid_search_fit, hybrid_distill, objective, FitConfig, FitOptions,
};
use scatterkit::pdp::AngularDataset;
use scatterkit::raytracer::{angular_spectra, simulate, ScatterModel};
use scatterkit::scattering::{GeometricFactor, MaterialParams, Polarization};
use tempfile::tempdir;

fn marble_bk() -> MaterialParams {
    MaterialParams {
        epsilon_r: 6.2,
        h_rms_mm: 1.0,
        corr_length_t_mm: 5.0,
        ..Default::default()
    }
}

fn spectra_for(
    scene: &scatterkit::geometry::Scene,
    params: &MaterialParams,
    model: ScatterModel,
    opts: &FitOptions,
) -> AngularDataset {
    angular_spectra(
        &simulate(scene, params, model, &opts.sim).unwrap(),
        opts.threshold_db,
        opts.window_ns,
    )
    .unwrap()
}

// ---------------------------------------------------------------------------
// Generalization
// ---------------------------------------------------------------------------

#[test]
fn generalization_self_consistency_and_sensitivity() {
    let opts = FitOptions::default();
    let (gain, hpbw) = horn_for(8e9);
    let truth = marble_bk();

    // Held-out scenes at 40/50/60° incidence; Rx fixed at 0° and the
    // specular direction, as in the off-30° measurement layout.
    let cases: Vec<(scatterkit::geometry::Scene, AngularDataset)> = [40.0, 50.0, 60.0]
        .iter()
        .map(|&ti| {
            let scene = arc_scene(8e9, 1.0, 1.0, ti, &[0.0, ti], &[1.7], gain, hpbw);
            let data = spectra_for(&scene, &truth, ScatterModel::Bk, &opts);
            (scene, data)
        })
        .collect();

    // Same parameters, no refit: zero discrepancy at every angle.
    let report = evaluate_generalization(&truth, ScatterModel::Bk, &cases, &opts).unwrap();
    assert_eq!(report.len(), 3);
    for (entry, expected_ti) in report.iter().zip([40.0, 50.0, 60.0]) {
        assert!((entry.theta_i_deg - expected_ti).abs() < 1e-9);
        assert_eq!(entry.n_points, 2);
        assert_eq!(entry.smape, 0.0);
        assert_eq!(entry.power_rmse_db, 0.0);
    }

    // Perturbing the roughness makes every angle strictly positive.
    let perturbed = MaterialParams {
        h_rms_mm: truth.h_rms_mm * 1.5,
        ..truth
    };
    let report = evaluate_generalization(&perturbed, ScatterModel::Bk, &cases, &opts).unwrap();
    for entry in &report {
        assert!(entry.smape > 0.0, "at {}", entry.theta_i_deg);
        assert!(entry.power_rmse_db > 0.0);
    }
}

// ---------------------------------------------------------------------------
// Grid search semantics
// ---------------------------------------------------------------------------

#[test]
fn trace_matches_brute_force_reevaluation() {
    let opts = FitOptions::default();
    let (gain, hpbw) = horn_for(8e9);
    let scene = arc_scene(8e9, 1.0, 1.0, 30.0, &sixteen_point_arc(), &[1.7], gain, hpbw);
    let measured = spectra_for(&scene, &marble_bk(), ScatterModel::Bk, &opts);

    let config = FitConfig {
        model: ScatterModel::Bk,
        epsilon_r: vec![5.8, 6.2],
        h_rms_mm: vec![0.8, 1.2],
        corr_length_t_mm: vec![4.0, 6.0],
        alpha_r: vec![1],
        alpha_i: vec![1],
        lambda_mix: vec![1.0],
    };
    let fit = grid_search_fit(&scene, &measured, &config, &opts).unwrap();
    assert_eq!(fit.trace.len(), 8);

    // Re-evaluate every candidate through the public pipeline and compare.
    for entry in &fit.trace {
        let again = objective(
            &measured,
            &spectra_for(&scene, &entry.params, ScatterModel::Bk, &opts),
        )
        .unwrap();
        assert_eq!(entry.smape, Some(again), "at {:?}", entry.params);
        assert!(entry.error.is_none());
    }
    let brute_best = fit
        .trace
        .iter()
        .filter_map(|t| t.smape)
        .fold(f64::INFINITY, f64::min);
    assert_eq!(fit.smape, brute_best);
}

#[test]
fn tie_breaks_to_first_candidate_in_grid_order() {
    // With a smooth surface the BK pattern is zero regardless of T, so all
    // T candidates tie exactly; the winner must be the first in grid order.
    let opts = FitOptions::default();
    let (gain, hpbw) = horn_for(8e9);
    let scene = arc_scene(8e9, 1.0, 1.0, 30.0, &[0.0, 30.0], &[1.7], gain, hpbw);
    let smooth = MaterialParams {
        epsilon_r: 6.2,
        h_rms_mm: 0.0,
        corr_length_t_mm: 3.0,
        ..Default::default()
    };
    let measured = spectra_for(&scene, &smooth, ScatterModel::Bk, &opts);
    let config = FitConfig {
        model: ScatterModel::Bk,
        epsilon_r: vec![6.2],
        h_rms_mm: vec![0.0],
        corr_length_t_mm: vec![2.0, 3.0, 4.0],
        alpha_r: vec![1],
        alpha_i: vec![1],
        lambda_mix: vec![1.0],
    };
    let fit = grid_search_fit(&scene, &measured, &config, &opts).unwrap();
    assert_eq!(fit.smape, 0.0);
    assert_eq!(fit.best.corr_length_t_mm, 2.0, "tie must go to the first grid entry");
}

#[test]
fn failed_candidates_are_recorded_not_fatal() {
    // An absurd roughness overflows the BK series for some candidates; the
    // fit must skip them and still return the sane winner.
    let opts = FitOptions::default();
    let (gain, hpbw) = horn_for(28e9);
    let scene = arc_scene(28e9, 1.0, 1.0, 30.0, &[0.0, 30.0], &[1.7], gain, hpbw);
    let measured = spectra_for(&scene, &marble_bk(), ScatterModel::Bk, &opts);
    let config = FitConfig {
        model: ScatterModel::Bk,
        epsilon_r: vec![6.2],
        h_rms_mm: vec![1.0, 900.0], // 0.9 m of roughness: series cannot converge
        corr_length_t_mm: vec![5.0],
        alpha_r: vec![1],
        alpha_i: vec![1],
        lambda_mix: vec![1.0],
    };
    let fit = grid_search_fit(&scene, &measured, &config, &opts).unwrap();
    assert_eq!(fit.best.h_rms_mm, 1.0);
    let failed: Vec<_> = fit.trace.iter().filter(|t| t.error.is_some()).collect();
    assert_eq!(failed.len(), 1);
    assert!(failed[0].error.as_ref().unwrap().contains("converge"));
}

// ---------------------------------------------------------------------------
// Hybrid distillation table
// ---------------------------------------------------------------------------

#[test]
fn hybrid_alpha_grows_and_theta_p_tracks_incidence() {
    let marble = MaterialParams {
        epsilon_r: 6.2,
        h_rms_mm: 1.1,
        corr_length_t_mm: 5.0,
        ..Default::default()
    };
    let entries = hybrid_distill(
        &marble,
        28e9,
        &[20.0, 40.0, 60.0, 80.0],
        GeometricFactor::Ogilvy,
        Polarization::Te,
    )
    .unwrap();
    // The fitted exponent is non-decreasing toward grazing (the lobe
    // narrows in ψ'-space), and the peak stays between the normal and the
    // specular direction.
    for pair in entries.windows(2) {
        assert!(pair[1].alpha_eff >= pair[0].alpha_eff);
    }
    for e in &entries {
        assert!(e.theta_p_deg >= 0.0 && e.theta_p_deg <= e.theta_i_deg);
    }
}

// ---------------------------------------------------------------------------
// CSV outputs
// ---------------------------------------------------------------------------

#[test]
fn fit_and_hybrid_csv_surfaces() {
    let dir = tempdir().unwrap();
    let opts = FitOptions::default();
    let (gain, hpbw) = horn_for(8e9);
    let scene = arc_scene(8e9, 1.0, 1.0, 30.0, &[0.0, 30.0], &[1.7], gain, hpbw);
    let measured = spectra_for(&scene, &marble_bk(), ScatterModel::Bk, &opts);
    let config = FitConfig {
        model: ScatterModel::Bk,
        epsilon_r: vec![6.2],
        h_rms_mm: vec![0.8, 1.0],
        corr_length_t_mm: vec![5.0],
        alpha_r: vec![1],
        alpha_i: vec![1],
        lambda_mix: vec![1.0],
    };
    let fit = grid_search_fit(&scene, &measured, &config, &opts).unwrap();

    let fit_path = dir.path().join("fit_result.csv");
    let trace_path = dir.path().join("trace.csv");
    csvio::write_fit_result(&fit, &fit_path).unwrap();
    csvio::write_trace(&fit.trace, &trace_path).unwrap();
    let fit_text = std::fs::read_to_string(&fit_path).unwrap();
    assert!(fit_text.starts_with(
        "epsilon_r,h_rms_mm,corr_length_t_mm,alpha_r,alpha_i,lambda_mix,smape"
    ));
    assert_eq!(fit_text.lines().count(), 2);
    let trace_text = std::fs::read_to_string(&trace_path).unwrap();
    assert_eq!(trace_text.lines().count(), 3); // header + 2 candidates

    let entries = hybrid_distill(
        &marble_bk(),
        28e9,
        &[20.0, 40.0],
        GeometricFactor::Ogilvy,
        Polarization::Te,
    )
    .unwrap();
    let hybrid_path = dir.path().join("hybrid_table.csv");
    csvio::write_hybrid_table(&entries, &hybrid_path).unwrap();
    let hybrid_text = std::fs::read_to_string(&hybrid_path).unwrap();
    assert!(hybrid_text.starts_with("frequency_ghz,theta_i_deg,s_eff,alpha_eff,theta_p_deg"));
    assert_eq!(hybrid_text.lines().count(), 3);
    assert!(hybrid_text.lines().nth(1).unwrap().starts_with("28,20,"));

    // Angular dataset round trip through the measured-data reader.
    let angular_path = dir.path().join("angular.csv");
    csvio::write_angular(&measured, &angular_path).unwrap();
    let back = csvio::read_angular(&angular_path).unwrap();
    assert_eq!(back, measured);
}
