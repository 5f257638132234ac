//! End-to-end checks on MacKay's 96.3.963 (3,6)-regular code.

use num_rational::BigRational;
use tanner_lo::certify::{certify_zero, unit_weight_sweep, verify_witness};
use tanner_lo::channel::{negate_relative_values, sample_llr, sample_llr_allzero, ChannelSpec};
use tanner_lo::scalar::convert_slice;
use tanner_lo::{
    certify_lo, certify_strong_lo, load_alist, min_deviation_cost, CertificateKind, CertifyOptions,
    TannerGraph, WeightVector,
};

fn mackay() -> TannerGraph {
    load_alist(include_str!("fixtures/mackay_96.3.963.alist")).unwrap()
}

#[test]
fn fixture_structure() {
    let g = mackay();
    assert_eq!(g.num_variables(), 96);
    assert_eq!(g.num_checks(), 48);
    assert_eq!(g.regular_degrees(), Some((3, 6)));
    assert_eq!(g.girth(), Some(6));
    assert_eq!(g.min_local_distance(), 2);
    assert!(g.dimension() >= 48);
    let again = load_alist(&g.to_alist()).unwrap();
    assert_eq!(again.to_alist(), g.to_alist());
}

#[test]
fn codeword_symmetry() {
    // Certifying a codeword x under channel output for x equals certifying
    // the zero word under the matching all-zero output.
    let g = mackay();
    let x = g.code_basis()[3].clone();
    assert!(g.is_codeword(&x).unwrap());
    let spec = ChannelSpec::bsc(0.03, 11).unwrap();
    let w = WeightVector::unit(6).unwrap();
    for trial in 0..20 {
        let llr_x = sample_llr(&x, &spec, trial).unwrap().values;
        let llr_0 = sample_llr_allzero(96, &spec, trial).unwrap().values;
        let a = certify_lo(&g, &x, &llr_x, &w, 2, &CertifyOptions::default()).unwrap();
        let b = certify_zero(&g, &llr_0, &w, 2, CertificateKind::Lo, &CertifyOptions::default()).unwrap();
        assert_eq!(a.decision, b.decision);
        assert_eq!(a.min_cost, b.min_cost);
        assert_eq!(a.witness_root, b.witness_root);
    }
    let zero = vec![0u8; 96];
    let mut bad = zero.clone();
    bad[0] = 1;
    assert!(certify_lo(&g, &bad, &[1.0; 96], &w, 2, &CertifyOptions::default()).is_err());
}

#[test]
fn float_and_exact_agree_and_sweep_matches_tables() {
    let g = mackay();
    let spec = ChannelSpec::bsc(0.05, 3).unwrap().normalized(true);
    let heights = [1, 2, 3, 5, 8];
    for trial in 0..15 {
        let llr = sample_llr_allzero(96, &spec, trial).unwrap().values;
        let exact: Vec<BigRational> = convert_slice(&llr);
        let sweep = unit_weight_sweep(&g, &exact, 2, &heights).unwrap();
        for pt in &sweep {
            let w = WeightVector::unit(pt.h).unwrap();
            let lo = min_deviation_cost(&g, &exact, &w, 2, false).unwrap();
            let nlo = min_deviation_cost(&g, &exact, &w, 2, true).unwrap();
            assert_eq!((lo.min_cost.clone(), lo.witness_root), (pt.lo_min.clone(), pt.lo_root));
            assert_eq!((nlo.min_cost.clone(), nlo.witness_root), (pt.nlo_min.clone(), pt.nlo_root));
            let float = certify_zero(&g, &llr, &w, 2, CertificateKind::Lo, &CertifyOptions::default()).unwrap();
            let rational = certify_zero(&g, &llr, &w, 2, CertificateKind::Lo, &CertifyOptions::exact()).unwrap();
            if !float.marginal {
                assert_eq!(float.decision, rational.decision);
            }
        }
    }
}

#[test]
fn refuted_certificates_carry_checkable_witnesses() {
    let g = mackay();
    let spec = ChannelSpec::bsc(0.12, 5).unwrap();
    let w = WeightVector::from_integers(&[1, 2]).unwrap();
    let zero = vec![0u8; 96];
    let mut refuted = 0;
    for trial in 0..10 {
        let llr = sample_llr_allzero(96, &spec, trial).unwrap().values;
        for strong in [false, true] {
            for opts in [CertifyOptions::default().with_witness(), CertifyOptions::exact().with_witness()] {
                let cert = if strong {
                    certify_strong_lo(&g, &zero, &llr, &w, 3, &opts).unwrap()
                } else {
                    certify_lo(&g, &zero, &llr, &w, 3, &opts).unwrap()
                };
                if !cert.is_certified() {
                    refuted += 1;
                    let llr0 = negate_relative_values(&zero, &llr).unwrap();
                    verify_witness(&g, &cert, &llr0).unwrap();
                }
            }
        }
    }
    assert!(refuted > 0);
}
