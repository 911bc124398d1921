//! Scale profiles: the knobs controlling gadget dimensions in the
//! constructions.
//!
//! The full-size profile fixes all parameters as polynomials in the
//! instance size; those magnitudes are only needed by the asymptotic
//! counting arguments, so graphs at that scale can be described and
//! censused but not searched. Desk profiles shrink everything to sizes
//! where matchings can be enumerated exhaustively, constrained only by the
//! alignment `h_c = 2t` that synthesis needs: each tower sequence has
//! length `2 h_c`, each of the `t` ladders consumes four of those cycles.

use serde::{Deserialize, Serialize};

use crate::error::ReductionError;
use crate::gadgets::CityScale;

/// The upper limit on vertex count for anything that enumerates matchings
/// or cycles; larger constructions are census-only.
pub const SEARCHABLE_VERTEX_LIMIT: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScaleProfile {
    /// Height `h_c` of every city tower.
    pub city_height: usize,
    /// Width `t_c` (tower count) of every city.
    pub city_width: usize,
    /// Ladder count `t` of every branch gadget.
    pub forall_width: usize,
}

impl ScaleProfile {
    /// A small profile coupled for synthesis: `h_c = 2t`.
    pub fn desk(t: usize, t_c: usize) -> Self {
        ScaleProfile {
            city_height: 2 * t,
            city_width: t_c,
            forall_width: t,
        }
    }

    /// The minimal synthesizable profile: `t = 1`, `h_c = 2`, `t_c = 1`.
    pub fn minimal() -> Self {
        ScaleProfile::desk(1, 1)
    }

    /// The full-size profile for instances with `n` vertices: city height
    /// `2n⁴`, city width `4n⁴ + 100n`, branch width `n⁴`. The width is
    /// chosen so that it exceeds the flip-sequence length the counting
    /// argument compares against.
    pub fn full_scale(n: usize) -> Self {
        let n4 = n.pow(4);
        ScaleProfile {
            city_height: 2 * n4,
            city_width: 4 * n4 + 100 * n,
            forall_width: n4,
        }
    }

    pub fn city_scale(&self) -> CityScale {
        CityScale {
            width: self.city_width,
            height: self.city_height,
        }
    }

    pub fn validate(&self) -> Result<(), ReductionError> {
        if self.city_height < 1 || self.city_width < 1 || self.forall_width < 1 {
            return Err(ReductionError::ProfileInvalid(
                "all gadget dimensions must be at least one".into(),
            ));
        }
        Ok(())
    }

    /// Synthesis additionally requires the alignment `h_c = 2t` and
    /// `h_c >= 2` (locked states need height two).
    pub fn validate_for_synthesis(&self) -> Result<(), ReductionError> {
        self.validate()?;
        if self.city_height != 2 * self.forall_width || self.city_height < 2 {
            return Err(ReductionError::ProfileMismatch(format!(
                "synthesis needs city height {} to equal twice the branch width {} (and be >= 2)",
                self.city_height, self.forall_width
            )));
        }
        Ok(())
    }

    /// Refuses profiles whose graphs are too large for exhaustive search.
    pub fn ensure_searchable(&self, vertex_count: usize) -> Result<(), ReductionError> {
        if vertex_count > SEARCHABLE_VERTEX_LIMIT {
            return Err(ReductionError::InfeasibleScale(format!(
                "{vertex_count} vertices exceeds the search limit of {SEARCHABLE_VERTEX_LIMIT}"
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn desk_profiles_are_synthesis_ready() {
        let p = ScaleProfile::desk(2, 1);
        assert_eq!(p.city_height, 4);
        p.validate_for_synthesis().unwrap();
        assert!(ScaleProfile::minimal().validate_for_synthesis().is_ok());
    }

    #[test]
    fn decoupled_profiles_fail_synthesis_validation_only() {
        let p = ScaleProfile {
            city_height: 3,
            city_width: 1,
            forall_width: 1,
        };
        p.validate().unwrap();
        assert!(matches!(
            p.validate_for_synthesis(),
            Err(ReductionError::ProfileMismatch(_))
        ));
    }

    #[test]
    fn full_scale_profile_formulas() {
        let p = ScaleProfile::full_scale(3);
        assert_eq!(p.city_height, 162);
        assert_eq!(p.city_width, 4 * 81 + 300);
        assert_eq!(p.forall_width, 81);
        p.validate_for_synthesis().unwrap();
    }
}
