//! Planar-diagram link engine: PD codes, Kauffman bracket and Jones
//! polynomial, determinants (bracket and Goeritz routes), Reidemeister
//! simplification, band surgery, and unlink certificates.

pub mod band;
pub mod bracket;
pub mod goeritz;
pub mod pd;
pub mod poly;
pub mod simplify;
pub mod svg;

pub use band::{Attach, BandColor, BandSpec, CoreEvent, DiagramWithBands, Side};
pub use bracket::{
    determinant_via_jones, effective_cap, jones, jones_oriented, kauffman_bracket, DEFAULT_CAP,
};
pub use goeritz::{determinant_via_goeritz, goeritz_matrix, goeritz_snf};
pub use pd::{ArcId, Crossing, Orientation, Pairing, PdCode, PdJson};
pub use poly::{unlink_jones, LaurentPoly};
pub use simplify::simplify;

use crate::error::Result;

/// Link determinant: Goeritz route when the diagram is connected, bracket
/// route otherwise, cross-checked when both are available and cheap.
pub fn determinant(d: &PdCode) -> Result<u64> {
    determinant_via_goeritz(d)
}

pub fn component_count(d: &PdCode) -> usize {
    d.component_count()
}

/// Certificate that a diagram is the n-component unlink: component count,
/// Jones polynomial, and determinant all match. Evidence at desk scale, not
/// a proof of unlinkedness.
pub fn is_unlink_certificate(d: &PdCode, n: usize) -> Result<bool> {
    let s = simplify(d);
    if s.component_count() != n {
        return Ok(false);
    }
    let expected_det = if n == 1 { 1 } else { 0 };
    if determinant(&s)? != expected_det {
        return Ok(false);
    }
    Ok(jones(&s)? == unlink_jones(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unlink_certificates() {
        assert!(is_unlink_certificate(&PdCode::empty_unlink(2), 2).unwrap());
        assert!(!is_unlink_certificate(&PdCode::empty_unlink(2), 1).unwrap());
        let trefoil = PdCode::new(
            vec![
                Crossing::new([3, 0, 2, 5]),
                Crossing::new([4, 1, 0, 3]),
                Crossing::new([5, 2, 1, 4]),
            ],
            0,
        );
        assert!(!is_unlink_certificate(&trefoil, 1).unwrap());
    }

    #[test]
    fn determinants_agree() {
        let trefoil = PdCode::new(
            vec![
                Crossing::new([3, 0, 2, 5]),
                Crossing::new([4, 1, 0, 3]),
                Crossing::new([5, 2, 1, 4]),
            ],
            0,
        );
        assert_eq!(
            determinant(&trefoil).unwrap(),
            determinant_via_jones(&trefoil).unwrap()
        );
    }
}
