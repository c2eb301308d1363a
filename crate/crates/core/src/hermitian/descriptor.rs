use std::fmt;

use crate::linalg::C64;

/// Which branch of the classification produced a descriptor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// A common isotropic vector exists.
    Isotropic,
    /// `A` is zero and `B` definite.
    ZeroLeading,
    /// `A` definite.
    CaseA,
    /// `A` semidefinite and singular.
    CaseB,
    /// `A` indefinite, `B` definite.
    CaseC,
    /// `A` indefinite, `B` semidefinite and singular.
    CaseD,
    /// `A` and `B` indefinite.
    CaseE,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Provenance::Isotropic => "isotropic",
            Provenance::ZeroLeading => "zero-leading",
            Provenance::CaseA => "a",
            Provenance::CaseB => "b",
            Provenance::CaseC => "c",
            Provenance::CaseD => "d",
            Provenance::CaseE => "e",
        };
        f.write_str(s)
    }
}

/// Shape of the numerical range of a Hermitian pencil. All sets except
/// `FullPlane` are subsets of the real line and include their finite
/// endpoints.
#[derive(Debug, Clone, PartialEq)]
pub enum RangeKind {
    FullPlane,
    /// `R \ (lo, hi)`.
    RealComplementOfInterval { lo: f64, hi: f64 },
    /// `[lo, inf)`.
    HalfLineUp { lo: f64 },
    /// `(-inf, hi]`.
    HalfLineDown { hi: f64 },
    /// `[lo, hi]`.
    Segment { lo: f64, hi: f64 },
    Point { at: f64 },
    Empty,
    /// `{1/mu : mu in inner, mu != 0} U {0}`, with the resulting set spelled
    /// out in `materialized`.
    InverseImage { inner: Box<RangeDescriptor>, materialized: Box<RangeKind> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RangeDescriptor {
    pub kind: RangeKind,
    pub provenance: Provenance,
}

impl RangeKind {
    /// The explicit set, looking through `InverseImage`.
    pub fn resolved(&self) -> &RangeKind {
        match self {
            RangeKind::InverseImage { materialized, .. } => materialized.resolved(),
            k => k,
        }
    }

    /// Membership with slack `tol` on the endpoints and the imaginary part.
    pub fn contains(&self, z: C64, tol: f64) -> bool {
        let k = self.resolved();
        if matches!(k, RangeKind::FullPlane) {
            return true;
        }
        if z.im.abs() > tol {
            return false;
        }
        let x = z.re;
        match *k {
            RangeKind::RealComplementOfInterval { lo, hi } => x <= lo + tol || x >= hi - tol,
            RangeKind::HalfLineUp { lo } => x >= lo - tol,
            RangeKind::HalfLineDown { hi } => x <= hi + tol,
            RangeKind::Segment { lo, hi } => x >= lo - tol && x <= hi + tol,
            RangeKind::Point { at } => (x - at).abs() <= tol,
            RangeKind::Empty => false,
            RangeKind::FullPlane | RangeKind::InverseImage { .. } => unreachable!(),
        }
    }

    /// A real number outside the set, or `None` for the full plane.
    pub fn excluded_real_point(&self) -> Option<f64> {
        match *self.resolved() {
            RangeKind::FullPlane => None,
            RangeKind::RealComplementOfInterval { lo, hi } => Some((lo + hi) / 2.0),
            RangeKind::HalfLineUp { lo } => Some(lo - 1.0),
            RangeKind::HalfLineDown { hi } => Some(hi + 1.0),
            RangeKind::Segment { hi, .. } => Some(hi + 1.0),
            RangeKind::Point { at } => Some(at + 1.0),
            RangeKind::Empty => Some(0.0),
            RangeKind::InverseImage { .. } => unreachable!(),
        }
    }

    /// Finite endpoints of the set in increasing order.
    pub fn endpoints(&self) -> Vec<f64> {
        match *self.resolved() {
            RangeKind::RealComplementOfInterval { lo, hi } | RangeKind::Segment { lo, hi } => vec![lo, hi],
            RangeKind::HalfLineUp { lo } => vec![lo],
            RangeKind::HalfLineDown { hi } => vec![hi],
            RangeKind::Point { at } => vec![at],
            _ => Vec::new(),
        }
    }
}

impl RangeDescriptor {
    pub fn contains(&self, z: C64, tol: f64) -> bool {
        self.kind.contains(z, tol)
    }

    pub fn is_full_plane(&self) -> bool {
        matches!(self.kind, RangeKind::FullPlane)
    }
}

/// Shortest decimal form, printing near-integers as integers.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.abs().max(1.0) {
        return format!("{}", r as i64);
    }
    let s = format!("{x:.10}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

impl fmt::Display for RangeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = format_number;
        match self {
            RangeKind::FullPlane => write!(f, "C"),
            RangeKind::RealComplementOfInterval { lo, hi } => write!(f, "R \\ ({},{})", n(*lo), n(*hi)),
            RangeKind::HalfLineUp { lo } => write!(f, "[{},inf)", n(*lo)),
            RangeKind::HalfLineDown { hi } => write!(f, "(-inf,{}]", n(*hi)),
            RangeKind::Segment { lo, hi } => write!(f, "[{},{}]", n(*lo), n(*hi)),
            RangeKind::Point { at } => write!(f, "{{{}}}", n(*at)),
            RangeKind::Empty => write!(f, "{{}}"),
            RangeKind::InverseImage { materialized, .. } => materialized.fmt(f),
        }
    }
}

impl fmt::Display for RangeDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.kind.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_forms() {
        assert_eq!(RangeKind::RealComplementOfInterval { lo: 1.0, hi: 2.0 }.to_string(), "R \\ (1,2)");
        assert_eq!(RangeKind::Segment { lo: -0.5, hi: 3.0 }.to_string(), "[-0.5,3]");
        assert_eq!(RangeKind::Point { at: -1.0 }.to_string(), "{-1}");
        assert_eq!(RangeKind::HalfLineUp { lo: 1.0000000000001 }.to_string(), "[1,inf)");
        assert_eq!(format_number(1.0 / 3.0), "0.3333333333");
    }

    #[test]
    fn membership_and_exclusion() {
        let k = RangeKind::RealComplementOfInterval { lo: 1.0, hi: 2.0 };
        assert!(k.contains(C64::new(1.0, 0.0), 0.0));
        assert!(!k.contains(C64::new(1.5, 0.0), 1e-9));
        assert!(!k.contains(C64::new(0.0, 1.0), 1e-9));
        let x = k.excluded_real_point().unwrap();
        assert!(!k.contains(C64::new(x, 0.0), 1e-9));
        assert!(RangeKind::FullPlane.excluded_real_point().is_none());
        for k in [
            RangeKind::HalfLineUp { lo: 2.0 },
            RangeKind::HalfLineDown { hi: -1.0 },
            RangeKind::Segment { lo: 0.0, hi: 1.0 },
            RangeKind::Point { at: 4.0 },
            RangeKind::Empty,
        ] {
            let x = k.excluded_real_point().unwrap();
            assert!(!k.contains(C64::new(x, 0.0), 1e-9), "{k}");
        }
    }

    #[test]
    fn inverse_image_resolves() {
        let inner = RangeDescriptor { kind: RangeKind::HalfLineUp { lo: 2.0 }, provenance: Provenance::CaseB };
        let k = RangeKind::InverseImage {
            inner: Box::new(inner),
            materialized: Box::new(RangeKind::Segment { lo: 0.0, hi: 0.5 }),
        };
        assert!(k.contains(C64::new(0.25, 0.0), 0.0));
        assert_eq!(k.endpoints(), vec![0.0, 0.5]);
        assert_eq!(k.to_string(), "[0,0.5]");
    }
}
