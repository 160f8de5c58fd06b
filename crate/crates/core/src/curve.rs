//! The hyperelliptic spectral curve `w² = F(z)`, `F` monic of degree `2g+1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::Params;
use crate::poly::{Bindings, Poly, Var};
use crate::resultant::discriminant;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralCurve {
    #[serde(rename = "g")]
    genus: u32,
    /// `c_0 .. c_{2g}`; the leading `z^{2g+1}` coefficient is implicitly 1.
    #[serde(rename = "c")]
    coeffs: Vec<Poly>,
}

impl SpectralCurve {
    /// Validates that `f` is free of x and monic of degree `2g+1` in z.
    pub fn from_poly(genus: u32, f: &Poly) -> Result<Self> {
        if !f.is_free_of(Var::X) {
            return Err(Error::XDependence(f.to_string()));
        }
        let mut cs = f.coeffs_in(Var::Z);
        let expected = 2 * genus + 1;
        let monic = cs.last().is_some_and(|c| *c == Poly::one());
        if cs.len() != expected as usize + 1 || !monic {
            return Err(Error::Degree {
                expected,
                found: f.to_string(),
            });
        }
        cs.pop();
        Ok(SpectralCurve { genus, coeffs: cs })
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    /// `c_{2g}`, the subleading coefficient.
    pub fn subleading(&self) -> &Poly {
        self.coeffs.last().expect("degree >= 3")
    }

    /// `F(z)` as a polynomial.
    pub fn poly(&self) -> Poly {
        let mut cs = self.coeffs.clone();
        cs.push(Poly::one());
        Poly::from_coeffs_in(Var::Z, &cs)
    }

    pub fn eval(&self, bindings: &Bindings) -> SpectralCurve {
        SpectralCurve {
            genus: self.genus,
            coeffs: self.coeffs.iter().map(|c| c.eval(bindings)).collect(),
        }
    }

    /// `disc_z(F)`, a polynomial in whatever parameters remain symbolic.
    pub fn discriminant(&self) -> Poly {
        discriminant(&self.poly(), Var::Z).expect("F has positive degree")
    }

    /// The affine model is smooth iff `F` is squarefree; with odd degree the
    /// single point at infinity of the smooth completion is always regular.
    pub fn is_nonsingular(&self, params: &Params) -> Result<bool> {
        if !params.is_fully_numeric() {
            return Err(Error::Param("all of a0..a3 must be numeric".into()));
        }
        let d = self.eval(&params.bindings()).discriminant();
        let value = d
            .as_constant()
            .ok_or_else(|| Error::Param(format!("discriminant still symbolic: {d}")))?;
        Ok(!num_traits::Zero::is_zero(&value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat_int;

    fn z() -> Poly {
        Poly::z()
    }

    #[test]
    fn rejects_wrong_shapes() {
        assert!(matches!(
            SpectralCurve::from_poly(1, &(z().pow(3) + Poly::x())),
            Err(Error::XDependence(_))
        ));
        assert!(matches!(
            SpectralCurve::from_poly(1, &z().pow(5)),
            Err(Error::Degree { .. })
        ));
        assert!(matches!(
            SpectralCurve::from_poly(1, &(Poly::int(2) * z().pow(3))),
            Err(Error::Degree { .. })
        ));
    }

    #[test]
    fn cubic_discriminant() {
        let a0 = Poly::var(Var::A0);
        let c = SpectralCurve::from_poly(1, &(z().pow(3) - a0.clone())).unwrap();
        assert_eq!(c.discriminant(), Poly::int(-27) * a0.pow(2));
        assert_eq!(c.poly(), z().pow(3) - a0);
    }

    #[test]
    fn cusp_is_singular() {
        let c = SpectralCurve::from_poly(1, &z().pow(3)).unwrap();
        assert!(c.discriminant().is_zero());
    }

    #[test]
    fn nonsingularity_needs_numeric_parameters() {
        let c = SpectralCurve::from_poly(1, &(z().pow(3) - Poly::var(Var::A0))).unwrap();
        assert!(c.is_nonsingular(&Params::dixmier_slice()).is_err());
        let one = Params::numeric(rat_int(1), rat_int(0), rat_int(0), rat_int(1)).unwrap();
        assert!(c.is_nonsingular(&one).unwrap());
        let cusp = Params::numeric(rat_int(0), rat_int(0), rat_int(0), rat_int(1)).unwrap();
        assert!(!c.is_nonsingular(&cusp).unwrap());
    }

    #[test]
    fn json_shape() {
        let c = SpectralCurve::from_poly(1, &(z().pow(3) - Poly::int(1))).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        assert!(s.starts_with(r#"{"g":1,"c":[{"terms":[{"c":"-1/1""#), "{s}");
    }
}
