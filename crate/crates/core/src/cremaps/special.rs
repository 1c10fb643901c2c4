//! Explicit identities: the degree 4 embedding, the κ automorphisms of the
//! degree 6 surface, the degree 1 discriminant, and the Cs.24 generators.

use serde::Serialize;

use super::{compose, span_invariance, Ambient, MapError, ProjMap};
use crate::exactmath::{parse_with, Cyclo, MultiPoly, Roster};

const CUBICS: [&str; 5] = [
    "b(a - c)x^2 z + c(b - a)x^2 y + a(a - c)y^2 z + a(b - a)y z^2 + 2a(c - b)xyz",
    "a(b - c)y^2 z + c(a - b)y^2 x + b(b - c)x^2 z + b(a - b)x z^2 + 2b(c - a)xyz",
    "b(c - a)z^2 x + a(b - c)z^2 y + c(c - a)y^2 x + c(b - c)y x^2 + 2c(a - b)xyz",
    "bc x^2(z - y) + ab z^2(y - x) + ac y^2(x - z)",
    "a yz(y - z) + b xz(z - x) + c xy(x - y)",
];

/// Roster for the embedding check: plane coordinates, then the parameters.
pub fn dp4_roster() -> Roster {
    Roster::new(&["x", "y", "z", "a", "b", "c"])
}

/// The cubics F₁..F₅ through (1:0:0), (0:1:0), (0:0:1), (1:1:1), (a:b:c),
/// with a, b, c as polynomial variables.
pub fn dp4_cubics() -> Vec<MultiPoly> {
    let r = dp4_roster();
    CUBICS
        .iter()
        .map(|s| parse_with(s, &r).expect("fixed cubic parses"))
        .collect()
}

/// Coefficients (on x₁², …, x₅²) of the two quadrics cutting out the image.
pub fn dp4_quadric_coefficients() -> [[&'static str; 5]; 2] {
    [
        ["c", "0", "-a", "a - c", "-ac(a - c)"],
        ["0", "c", "-b", "b - c", "bc(c - b)"],
    ]
}

/// Σ kᵢ·Fᵢ² for the given coefficient strings in a, b, c.
pub fn quadric_residual(coeffs: &[&str; 5], cubics: &[MultiPoly]) -> MultiPoly {
    let r = dp4_roster();
    let mut acc = MultiPoly::zero(r.len());
    for (k, f) in coeffs.iter().zip(cubics) {
        let k = parse_with(k, &r).expect("coefficient parses");
        acc = &acc + &(&k * &f.pow(2));
    }
    acc
}

#[derive(Debug, Clone, Serialize)]
pub struct Dp4Report {
    pub residuals: Vec<String>,
    pub pass: bool,
}

/// Substitutes (F₁ : … : F₅) into both quadrics with symbolic a, b, c.
pub fn verify_dp4_embedding() -> Dp4Report {
    let cubics = dp4_cubics();
    let r = dp4_roster();
    let res: Vec<MultiPoly> = dp4_quadric_coefficients()
        .iter()
        .map(|q| quadric_residual(q, &cubics))
        .collect();
    Dp4Report {
        pass: res.iter().all(MultiPoly::is_zero),
        residuals: res.iter().map(|p| p.fmt_with(&r)).collect(),
    }
}

/// κ_{α,β}: (x:y:z) × (u:v:w) ↦ (u : αw : βv) × (x : α⁻¹z : β⁻¹y).
pub fn kappa(alpha: &Cyclo, beta: &Cyclo) -> Result<ProjMap, MapError> {
    let a = Ambient::p2xp2();
    let n = a.nvars();
    let v = |i: usize| MultiPoly::var(n, i);
    let (ai, bi) = (
        alpha.inv().map_err(|_| MapError::Vanishing)?,
        beta.inv().map_err(|_| MapError::Vanishing)?,
    );
    ProjMap::new(
        &a,
        vec![
            v(3),
            v(5).scale(alpha),
            v(4).scale(beta),
            v(0),
            v(2).scale(&ai),
            v(1).scale(&bi),
        ],
    )
}

/// The closed form of κ²: (x : αβ⁻¹y : α⁻¹βz) × (u : α⁻¹βv : αβ⁻¹w).
pub fn kappa_square_closed_form(alpha: &Cyclo, beta: &Cyclo) -> Result<ProjMap, MapError> {
    let a = Ambient::p2xp2();
    let n = a.nvars();
    let v = |i: usize| MultiPoly::var(n, i);
    let r = alpha / beta;
    let ri = beta / alpha;
    ProjMap::new(
        &a,
        vec![
            v(0),
            v(1).scale(&r),
            v(2).scale(&ri),
            v(3),
            v(4).scale(&ri),
            v(5).scale(&r),
        ],
    )
}

/// Equations ux − vy and vy − wz of the degree 6 surface in P² × P².
pub fn dp6_equations() -> Vec<MultiPoly> {
    let a = Ambient::p2xp2();
    vec![a.parse("ux - vy").unwrap(), a.parse("vy - wz").unwrap()]
}

#[derive(Debug, Clone, Serialize)]
pub struct KappaReport {
    pub map: String,
    pub preserves_surface: bool,
    pub square_matches: bool,
}

pub fn verify_kappa(alpha: &Cyclo, beta: &Cyclo) -> Result<KappaReport, MapError> {
    let k = kappa(alpha, beta)?;
    let sq = compose(&k, &k)?;
    Ok(KappaReport {
        map: k.to_string(),
        preserves_surface: span_invariance(&dp6_equations(), &k),
        square_matches: sq == kappa_square_closed_form(alpha, beta)?,
    })
}

/// Δ = 27·F₆² + 4·F₄³ for binary forms of degrees 4 and 6.
pub fn discriminant_dp1(f4: &MultiPoly, f6: &MultiPoly) -> Result<MultiPoly, MapError> {
    let deg_ok =
        |p: &MultiPoly, d: u32| p.is_zero() || (p.is_homogeneous() && p.total_degree() == d);
    if !deg_ok(f4, 4) {
        return Err(MapError::NotHomogeneous(0));
    }
    if !deg_ok(f6, 6) {
        return Err(MapError::NotHomogeneous(1));
    }
    let d = &f6.pow(2).scale(&Cyclo::int(27)) + &f4.pow(3).scale(&Cyclo::int(4));
    if d.is_zero() {
        return Err(MapError::Vanishing);
    }
    Ok(d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FiberType {
    SingularRational,
    SmoothElliptic,
}

/// Type of the fibre of the elliptic fibration over the point `p` of the base line.
pub fn fiber_type(f4: &MultiPoly, f6: &MultiPoly, p: &[Cyclo]) -> Result<FiberType, MapError> {
    let d = discriminant_dp1(f4, f6)?;
    if p.iter().all(Cyclo::is_zero) {
        return Err(MapError::ZeroPoint);
    }
    Ok(if d.eval(p).is_zero() {
        FiberType::SingularRational
    } else {
        FiberType::SmoothElliptic
    })
}

/// g₁′ and g₂′ generating the Cs.24 group.
pub fn cs24_generators() -> (ProjMap, ProjMap) {
    let a = Ambient::p2();
    (
        ProjMap::parse(&a, "(yz : xy : -xz)").unwrap(),
        ProjMap::parse(&a, "(yz(y - z) : xz(y + z) : xy(y + z))").unwrap(),
    )
}

/// The quadratic involution (ayz : bxz : cxy).
pub fn quadratic_involution(a: &Cyclo, b: &Cyclo, c: &Cyclo) -> Result<ProjMap, MapError> {
    let amb = Ambient::p2();
    let yz = amb.parse("yz").unwrap();
    let xz = amb.parse("xz").unwrap();
    let xy = amb.parse("xy").unwrap();
    ProjMap::new(&amb, vec![yz.scale(a), xz.scale(b), xy.scale(c)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedding_identity_holds() {
        let r = verify_dp4_embedding();
        assert!(r.pass, "{:?}", r.residuals);
    }

    #[test]
    fn kappa_squares() {
        let one = Cyclo::one();
        assert!(
            compose(&kappa(&one, &one).unwrap(), &kappa(&one, &one).unwrap())
                .unwrap()
                .is_identity()
        );
        let r = verify_kappa(&Cyclo::zeta(3), &Cyclo::int(2)).unwrap();
        assert!(r.preserves_surface && r.square_matches);
    }

    #[test]
    fn discriminant_examples() {
        let a = Roster::new(&["x", "y"]);
        let p = |s: &str| parse_with(s, &a).unwrap();
        let pt = |x: i64, y: i64| [Cyclo::int(x), Cyclo::int(y)];
        assert_eq!(
            fiber_type(&p("0"), &p("x^6 + y^6"), &pt(1, 1)),
            Ok(FiberType::SmoothElliptic)
        );
        assert_eq!(
            discriminant_dp1(&p("0"), &p("x^6 + y^6"))
                .unwrap()
                .eval(&pt(1, 1)),
            Cyclo::int(108)
        );
        assert_eq!(
            fiber_type(&p("0"), &p("x y^5"), &pt(0, 1)),
            Ok(FiberType::SingularRational)
        );
        assert_eq!(
            fiber_type(&p("x^4"), &p("y^6"), &pt(0, 1)),
            Ok(FiberType::SmoothElliptic)
        );
        assert!(discriminant_dp1(&p("0"), &p("0")).is_err());
        assert!(discriminant_dp1(&p("x^3"), &p("y^6")).is_err());
    }
}
