//! One elimination step as a checkable object.
//!
//! A relation over `k` consists of the input divisor `D`, a function `Φ`
//! vanishing on `D` and a product `Ψ = scale·∏ψ_j` of small functions with
//! `Φ(P_𝓘) = Ψ(P_𝓘)`. Writing `R = div Ψ − div Φ + D`, taking norms to F_q
//! and logs gives
//!
//! `Log N(D) = Log N(R) + log N(lc Ψ / lc Φ)`,
//!
//! where `Log` of an effective divisor means `Log(D − deg(D)·[0_E])` and
//! `lc` is the leading coefficient at `0_E` (see [`Func::lc`]). The constant
//! `κ = N(lc Ψ / lc Φ)` lies in F_q.

use serde::{Deserialize, Serialize};

use crate::algebra::{Fe, Field};
use crate::curve::Pt;
use crate::divisor::{divisor_of_function, Divisor, DivisorDoc, Func, FuncDoc};
use crate::error::{Error, Result};
use crate::model::Model;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationKind {
    /// Degree 3 to degree 2.
    Elim32,
    /// Degree 4 to degree 3.
    Elim43,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub kind: RelationKind,
    /// Tower level `i` of `k = F_{q^{2^i}}`.
    pub level: usize,
    /// Effective divisor over `k` being eliminated.
    pub input: Divisor,
    pub phi: Func,
    pub factors: Vec<Func>,
    pub scale: Fe,
    /// `div Ψ − div Φ + D`, over `k`.
    pub rhs: Divisor,
    /// `N_{k/F_q}(lc Ψ / lc Φ)`, in F_q.
    pub kappa: Fe,
}

impl Relation {
    /// Builds the relation and checks `Φ(P_𝓘) = Ψ(P_𝓘) ≠ 0`.
    pub fn assemble(
        m: &Model,
        k: &Field,
        kind: RelationKind,
        level: usize,
        input: Divisor,
        phi: Func,
        factors: Vec<Func>,
        scale: Fe,
    ) -> Result<Relation> {
        let c = &m.curve;
        check_values(m, k, &phi, &factors, &scale)?;
        let mut rhs = input.clone();
        rhs = rhs.sub(&divisor_of_function(c, k, &phi));
        for f in &factors {
            rhs = rhs.add(&divisor_of_function(c, k, f));
        }
        let kappa = kappa_of(m, k, &phi, &factors, &scale)?;
        Ok(Relation { kind, level, input, phi, factors, scale, rhs, kappa })
    }

    /// Field of definition `F_{q^{2^i}}`.
    pub fn field(&self, m: &Model) -> std::sync::Arc<Field> {
        m.level_field(self.level)
    }

    /// Recomputes every derived quantity from `Φ`, the factors and the input.
    pub fn verify(&self, m: &Model) -> Result<()> {
        let k = self.field(m);
        let c = &m.curve;
        let fail = |what: &str| Err(Error::Verify(format!("{:?} relation at level {}: {what}", self.kind, self.level)));
        if self.input.base != k.degree() || self.rhs.base != k.degree() {
            return fail("divisor over the wrong field");
        }
        if self.phi.m != k.degree() || self.factors.iter().any(|f| f.m != k.degree()) {
            return fail("function over the wrong field");
        }
        if !self.input.is_effective() || self.input.at_infinity() != 0 {
            return fail("input is not an effective finite divisor");
        }
        let want_deg = match self.kind {
            RelationKind::Elim32 => 3,
            RelationKind::Elim43 => 4,
        };
        if self.input.degree() != want_deg {
            return fail("input has the wrong degree");
        }
        if self.phi.is_zero() || self.factors.iter().any(|f| f.is_zero()) || self.scale.is_zero() {
            return fail("zero function");
        }
        if check_values(m, &k, &self.phi, &self.factors, &self.scale).is_err() {
            return fail("Φ and Ψ differ at the kernel place");
        }
        let div_phi = divisor_of_function(c, &k, &self.phi);
        let vanish = div_phi.sub(&self.input);
        if vanish.terms.iter().any(|(pl, &mult)| mult < 0 && self.input.terms.contains_key(pl)) {
            return fail("Φ does not vanish on the input");
        }
        let mut rhs = self.input.sub(&div_phi);
        for f in &self.factors {
            rhs = rhs.add(&divisor_of_function(c, &k, f));
        }
        if rhs != self.rhs {
            return fail("right-hand side does not match div Ψ − div Φ + D");
        }
        if kappa_of(m, &k, &self.phi, &self.factors, &self.scale)? != self.kappa {
            return fail("constant term does not match the leading coefficients");
        }
        Ok(())
    }

    /// Input and right-hand side normed down to F_q.
    pub fn normed(&self, m: &Model) -> (Divisor, Divisor) {
        let c = &m.curve;
        (self.input.norm_to(c, m.r()), self.rhs.norm_to(c, m.r()))
    }

    pub fn to_doc(&self, m: &Model) -> RelationDoc {
        let k = self.field(m);
        let c = &m.curve;
        RelationDoc {
            kind: self.kind,
            level: self.level,
            input: self.input.to_doc(c),
            phi: self.phi.to_doc(&k),
            factors: self.factors.iter().map(|f| f.to_doc(&k)).collect(),
            scale: k.to_hex(&self.scale),
            rhs: self.rhs.to_doc(c),
            kappa: m.base().to_hex(&self.kappa),
        }
    }

    /// Parses a relation; call [`Relation::verify`] to check it.
    pub fn from_doc(m: &Model, doc: &RelationDoc) -> Result<Relation> {
        if doc.level > 16 {
            return Err(Error::Format("relation level out of range".into()));
        }
        let kd = m.r() << doc.level;
        if kd > crate::algebra::field::MAX_DEGREE {
            return Err(Error::Format("relation field too large".into()));
        }
        let k = m.level_field(doc.level);
        let c = &m.curve;
        let hex = |f: &Field, s: &str| f.from_hex(s).ok_or_else(|| Error::Format("bad field element".into()));
        let input = Divisor::from_doc(c, &doc.input)?;
        let rhs = Divisor::from_doc(c, &doc.rhs)?;
        if input.base != kd || rhs.base != kd {
            return Err(Error::Format("relation divisor over the wrong field".into()));
        }
        Ok(Relation {
            kind: doc.kind,
            level: doc.level,
            input,
            phi: Func::from_doc(&doc.phi, &k)?,
            factors: doc.factors.iter().map(|f| Func::from_doc(f, &k)).collect::<Result<_>>()?,
            scale: hex(&k, &doc.scale)?,
            rhs,
            kappa: hex(m.base(), &doc.kappa)?,
        })
    }
}

fn check_values(m: &Model, k: &Field, phi: &Func, factors: &[Func], scale: &Fe) -> Result<()> {
    let big = m.eval_field(k);
    let lhs = m.eval_at_kernel(k, phi)?;
    let mut rhs = big.embed_from(k.degree(), scale);
    for f in factors {
        rhs = big.mul(&rhs, &m.eval_at_kernel(k, f)?);
    }
    if lhs.is_zero() || lhs != rhs {
        return Err(Error::Degenerate("Φ and Ψ differ at the kernel place".into()));
    }
    Ok(())
}

fn kappa_of(m: &Model, k: &Field, phi: &Func, factors: &[Func], scale: &Fe) -> Result<Fe> {
    let mut lc = *scale;
    for f in factors {
        lc = k.mul(&lc, &f.lc());
    }
    let ratio = k.div(&lc, &phi.lc());
    let nv = k.norm_to(&ratio, m.r());
    k.restrict_to(m.r(), &nv).ok_or_else(|| Error::Internal("norm of a constant is not in F_q".into()))
}

/// Serialized [`Relation`]; field elements are hex strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationDoc {
    pub kind: RelationKind,
    pub level: usize,
    pub input: DivisorDoc,
    pub phi: FuncDoc,
    pub factors: Vec<FuncDoc>,
    pub scale: String,
    pub rhs: DivisorDoc,
    pub kappa: String,
}

/// Helper shared by the eliminations: the point `pt` of `E(k)` as a place
/// over `k`.
pub fn point_divisor(m: &Model, k: &Field, pt: &Pt, mult: i64) -> Divisor {
    let mut d = Divisor::new(k.degree());
    d.add_point(&m.curve, k, pt, mult);
    d
}
