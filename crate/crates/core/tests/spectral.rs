use kendall_bounds::characters::{character, spectral_data};
use kendall_bounds::partition::Partition;

mod common;
use common::*;

#[test]
fn class_sum_eigenvalues_match_central_characters() {
    for n in 1..=4 {
        class_sum_spectra(n).unwrap();
    }
}

#[test]
fn numerical_blocks_match_irreducibles() {
    for n in 1..=4 {
        let blocks = isotypic_blocks(n).unwrap();
        let spectra = spectral_data(n).unwrap();
        for b in &blocks {
            let f = spectra.dims[b.irreducible];
            assert!((b.projector.trace() - (f * f) as f64).abs() < 1e-9);
        }
    }
}

#[test]
fn split_projectors_are_orthogonal_idempotents() {
    for n in 1..=4 {
        split_projector_claims(n).unwrap();
    }
}

#[test]
fn character_identities_up_to_eleven() {
    for n in 1..=11 {
        character_identities(n).unwrap();
    }
}

#[test]
fn s3_characters() {
    let p = |v: &[u8]| Partition::new(v.to_vec());
    assert_eq!(character(&p(&[2, 1]), &p(&[3])).unwrap(), -1);
    assert_eq!(character(&p(&[2, 1]), &p(&[1, 1, 1])).unwrap(), 2);
    assert_eq!(character(&p(&[1, 1, 1]), &p(&[2, 1])).unwrap(), -1);
    for mu in [p(&[3]), p(&[2, 1]), p(&[1, 1, 1])] {
        assert_eq!(character(&p(&[3]), &mu).unwrap(), 1);
    }
    // trivial, standard, sign in partition order
    let spectra = spectral_data(3).unwrap();
    assert_eq!(spectra.order, vec![p(&[3]), p(&[2, 1]), p(&[1, 1, 1])]);
    assert_eq!(spectra.m1_nonzero, vec![true, true, false]);
    assert_eq!(spectra.m2_nonzero, vec![false, true, true]);
    assert!(character(&p(&[3]), &p(&[2, 1, 1])).is_err());
}
