//! Certificates for solved discrete logarithms and their verification.
//!
//! A certificate lists everything needed to recheck an answer without any
//! search: the model, the factor-base relations with the logs they fix,
//! every descent relation with its value, and the lift of the target.
//! [`verify`] replays each item and reports the first one that fails.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algebra::{int, Fe, Field};
use crate::descent::place_label;
use crate::divisor::{divisor_of_function, Divisor, Func, FuncDoc, Place, PlaceTerm};
use crate::dlp::{mod_mult, BaseLogs, DlogRun, Echelon, FbRow};
use crate::error::{Error, Result};
use crate::model::{Model, ModelDoc, SCHEMA_VERSION};
use crate::policy::Policy;
use crate::relation::{Relation, RelationDoc};

/// One factor-base relation: `G(𝓘) = g^shift` and
/// `Σ mult·Log(Π) = shift − lc_log (mod ℓ)` over `terms`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowDoc {
    pub shift: String,
    pub function: FuncDoc,
    pub lc_log: String,
    pub terms: Vec<PlaceTerm>,
}

/// A top-degree factor-base place and the relation fixing its log.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopRowDoc {
    pub place: PlaceTerm,
    pub row: RowDoc,
}

/// A descent node: `Log(place) = Σ mult·Log(child) + log κ (mod ℓ)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeDoc {
    pub place: PlaceTerm,
    pub relation: RelationDoc,
    pub log_kappa: String,
    pub log: String,
}

/// The target lift: `G(𝓘) = h·g^shift` and `div G = place − deg·[0_E]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftDoc {
    pub shift: String,
    pub function: FuncDoc,
    pub place: PlaceTerm,
    pub lc_log: String,
}

/// A factor-base place with its log mod `ℓ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogDoc {
    pub place: PlaceTerm,
    pub log: String,
}

/// How the certificate was produced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    pub policy: Policy,
    pub factor_base_size: usize,
    pub elimination_samples: u64,
}

/// Serialized certificate. Integers that may exceed 2^53 are decimal
/// strings; field elements are hex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema_version: u32,
    pub model_digest: String,
    pub model: ModelDoc,
    pub generator: String,
    pub target: String,
    pub group_order: String,
    pub ell: String,
    pub s: String,
    pub answer: String,
    pub answer_mod_ell: String,
    pub answer_mod_s: String,
    pub lift: Option<LiftDoc>,
    pub nodes: Vec<NodeDoc>,
    pub factor_base_logs: Vec<LogDoc>,
    pub small_rows: Vec<RowDoc>,
    pub top_rows: Vec<TopRowDoc>,
    pub matrix_digest: String,
    pub provenance: Provenance,
    /// SHA-256 of the certificate with this field empty.
    pub digest: String,
}

fn row_doc(m: &Model, row: &FbRow) -> RowDoc {
    RowDoc {
        shift: row.shift.to_string(),
        function: row.func.to_doc(m.base()),
        lc_log: row.lc_log.to_string(),
        terms: row.terms.iter().map(|(p, e)| PlaceTerm::new(&m.curve, p, *e)).collect(),
    }
}

fn sha_hex<T: Serialize>(v: &T) -> String {
    hex::encode(Sha256::digest(serde_json::to_vec(v).expect("serializable")))
}

/// SHA-256 of the canonical JSON of the relation rows.
pub fn matrix_digest(small: &[RowDoc], top: &[TopRowDoc]) -> String {
    sha_hex(&(small, top))
}

impl Certificate {
    /// Assembles the certificate of a solved instance.
    pub fn build(m: &Model, run: &DlogRun, seed: u64, policy: &Policy) -> Certificate {
        let big = m.field();
        let c = &m.curve;
        let small_rows: Vec<RowDoc> = run.small_rows.iter().map(|r| row_doc(m, r)).collect();
        let top_rows: Vec<TopRowDoc> = run
            .top_rows
            .iter()
            .map(|(p, r)| TopRowDoc { place: PlaceTerm::new(c, p, 1), row: row_doc(m, r) })
            .collect();
        let mut cert = Certificate {
            schema_version: SCHEMA_VERSION,
            model_digest: m.digest(),
            model: m.to_doc(),
            generator: big.to_hex(&run.generator),
            target: big.to_hex(&run.target),
            group_order: m.group_order().to_string(),
            ell: m.ell.to_string(),
            s: m.s.to_string(),
            answer: run.answer.to_string(),
            answer_mod_ell: run.answer_mod_ell.to_string(),
            answer_mod_s: run.answer_mod_s.to_string(),
            lift: run.lift.as_ref().map(|l| LiftDoc {
                shift: l.shift.to_string(),
                function: l.func.to_doc(m.base()),
                place: PlaceTerm::new(c, &l.place, 1),
                lc_log: l.lc_log.to_string(),
            }),
            nodes: run
                .nodes
                .iter()
                .map(|(node, kl, v)| NodeDoc {
                    place: PlaceTerm::new(c, &node.place, 1),
                    relation: node.relation.to_doc(m),
                    log_kappa: kl.to_string(),
                    log: v.to_string(),
                })
                .collect(),
            factor_base_logs: run
                .fb_logs
                .iter()
                .map(|(p, v)| LogDoc { place: PlaceTerm::new(c, p, 1), log: v.to_string() })
                .collect(),
            matrix_digest: matrix_digest(&small_rows, &top_rows),
            small_rows,
            top_rows,
            provenance: Provenance {
                tool: "ecdlog".into(),
                version: env!("CARGO_PKG_VERSION").into(),
                seed,
                policy: policy.clone(),
                factor_base_size: run.factor_base_size,
                elimination_samples: run.samples,
            },
            digest: String::new(),
        };
        cert.digest = cert.body_digest();
        cert
    }

    /// SHA-256 of the canonical JSON with the digest field cleared.
    pub fn body_digest(&self) -> String {
        let mut body = self.clone();
        body.digest.clear();
        sha_hex(&body)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Certificate> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Summary of a successful verification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub ok: bool,
    pub answer: String,
    pub rows_checked: usize,
    pub nodes_checked: usize,
}

fn fail<T>(msg: String) -> Result<T> {
    Err(Error::Verify(msg))
}

fn int_field(name: &str, s: &str) -> Result<u128> {
    s.parse::<u128>().map_err(|_| Error::Verify(format!("{name}: bad integer {s:?}")))
}

struct Replay<'a> {
    m: &'a Model,
    big: &'a Field,
    g: Fe,
    logs: BaseLogs,
    ell: u128,
}

impl Replay<'_> {
    fn place(&self, t: &PlaceTerm, what: &str) -> Result<Place> {
        t.place(&self.m.curve, self.m.r()).map_err(|e| Error::Verify(format!("{what}: {e}")))
    }

    fn func(&self, d: &FuncDoc, what: &str) -> Result<Func> {
        let f = Func::from_doc(d, self.m.base()).map_err(|e| Error::Verify(format!("{what}: {e}")))?;
        if f.is_zero() {
            return fail(format!("{what}: zero function"));
        }
        Ok(f)
    }

    /// Checks `G(𝓘) = value`, `lc_log = log lc(G)` and returns the finite
    /// part of `div G`.
    fn lifted(&self, f: &Func, value: &Fe, lc_log: u128, what: &str) -> Result<Divisor> {
        let at = self.m.residue_eval(f).map_err(|e| Error::Verify(format!("{what}: {e}")))?;
        if at != *value {
            return fail(format!("{what}: function value at the kernel place is wrong"));
        }
        if self.logs.log(self.m.base(), &f.lc()) != lc_log {
            return fail(format!("{what}: leading-coefficient log is wrong"));
        }
        Ok(divisor_of_function(&self.m.curve, self.m.base(), f).finite_part())
    }

    /// Replays a factor-base row; returns its terms and right-hand side.
    fn row(&self, row: &RowDoc, what: &str) -> Result<(Vec<(Place, i64)>, u128)> {
        let shift = int_field(what, &row.shift)?;
        let lc_log = int_field(what, &row.lc_log)?;
        let f = self.func(&row.function, what)?;
        let div = self.lifted(&f, &self.big.pow(&self.g, shift), lc_log, what)?;
        let mut terms = Vec::new();
        for t in &row.terms {
            terms.push((self.place(t, what)?, t.mult));
        }
        let listed: BTreeMap<Place, i64> = terms.iter().copied().collect();
        if listed.len() != terms.len() || listed != div.terms {
            return fail(format!("{what}: listed terms differ from the divisor of the function"));
        }
        let rhs = (shift % self.ell + self.ell - lc_log % self.ell) % self.ell;
        Ok((terms, rhs))
    }
}

fn log_of(values: &HashMap<Place, u128>, p: &Place, m: &Model, what: &str) -> Result<u128> {
    values
        .get(p)
        .copied()
        .ok_or_else(|| Error::Verify(format!("{what}: no log for place {}", place_label(&m.curve, p))))
}

/// Replays a certificate against its embedded model.
pub fn verify(cert: &Certificate) -> Result<VerifyReport> {
    if cert.schema_version != SCHEMA_VERSION {
        return fail(format!("unsupported schema version {}", cert.schema_version));
    }
    let m = Model::from_doc(&cert.model).map_err(|e| Error::Verify(format!("model: {e}")))?;
    verify_with(cert, &m)
}

/// Replays a certificate against a given model.
pub fn verify_with(cert: &Certificate, m: &Model) -> Result<VerifyReport> {
    if cert.model_digest != m.digest() || cert.model != m.to_doc() {
        return fail("model digest does not match".into());
    }
    let big = m.field();
    let order = m.group_order();
    let ell = m.ell;
    if int_field("group_order", &cert.group_order)? != order
        || int_field("ell", &cert.ell)? != ell
        || int_field("s", &cert.s)? != m.s
    {
        return fail("group order split does not match the model".into());
    }
    let hex = |name: &str, s: &str| big.from_hex(s).ok_or_else(|| Error::Verify(format!("{name}: bad field element")));
    let g = hex("generator", &cert.generator)?;
    let h = hex("target", &cert.target)?;
    let primes: Vec<u128> = int::factorize(order).into_iter().map(|(p, _)| p).collect();
    if !crate::dlp::has_order(big, &g, order, &primes) {
        return fail("generator: order is not q^n - 1".into());
    }
    if h.is_zero() {
        return fail("target: zero".into());
    }
    let answer = int_field("answer", &cert.answer)?;
    let x_ell = int_field("answer_mod_ell", &cert.answer_mod_ell)?;
    let x_s = int_field("answer_mod_s", &cert.answer_mod_s)?;
    if answer >= order || x_ell >= ell || x_s >= m.s {
        return fail("answer: value out of range".into());
    }
    if answer % ell != x_ell || answer % m.s != x_s {
        return fail("answer: residues do not match the answer".into());
    }
    if big.pow(&big.pow(&g, ell), x_s) != big.pow(&h, ell) {
        return fail("answer_mod_s: (g^ℓ)^x does not equal h^ℓ".into());
    }

    let rp = Replay { m, big, g, logs: BaseLogs::new(m, &g), ell };
    let mut values: HashMap<Place, u128> = HashMap::new();
    for (i, l) in cert.factor_base_logs.iter().enumerate() {
        let what = format!("factor_base_logs[{i}]");
        let p = rp.place(&l.place, &what)?;
        let v = int_field(&what, &l.log)?;
        if l.place.mult != 1 || v >= ell || values.insert(p, v).is_some() {
            return fail(format!("{what}: malformed entry"));
        }
    }
    let mut rows_checked = 0;
    if ell > 1 {
        if matrix_digest(&cert.small_rows, &cert.top_rows) != cert.matrix_digest {
            return fail("matrix_digest: does not match the rows".into());
        }
        // Small rows: each identity holds and together they pin down the
        // logs of every place they involve.
        let mut cols: BTreeMap<Place, usize> = BTreeMap::new();
        let mut parsed = Vec::new();
        for (i, row) in cert.small_rows.iter().enumerate() {
            let what = format!("small_rows[{i}]");
            let (terms, rhs) = rp.row(row, &what)?;
            let mut acc = 0u128;
            for (p, e) in &terms {
                acc = (acc + int::mulmod(mod_mult(*e, ell), log_of(&values, p, m, &what)?, ell)) % ell;
                let n = cols.len();
                cols.entry(*p).or_insert(n);
            }
            if acc != rhs {
                return fail(format!("{what}: relation does not hold for the stated logs"));
            }
            parsed.push(terms);
            rows_checked += 1;
        }
        for (p, e) in int::factorize(ell) {
            let mut ech = Echelon::new(p, p.pow(e), cols.len());
            for terms in &parsed {
                let mut coeffs = vec![0u128; cols.len()];
                for (pl, mult) in terms {
                    coeffs[cols[pl]] = mod_mult(*mult, p.pow(e));
                }
                ech.insert(&coeffs, 0);
            }
            if !ech.is_full() {
                return fail(format!("small_rows: rank {} of {} modulo {}^{}", ech.rank(), cols.len(), p, e));
            }
        }
        for p in values.keys() {
            if !cols.contains_key(p) && !cert.top_rows.iter().any(|t| rp.place(&t.place, "top").ok() == Some(*p)) {
                return fail(format!("factor_base_logs: place {} is not determined by any row", place_label(&m.curve, p)));
            }
        }
        for (i, t) in cert.top_rows.iter().enumerate() {
            let what = format!("top_rows[{i}]");
            let top = rp.place(&t.place, &what)?;
            let (terms, rhs) = rp.row(&t.row, &what)?;
            let mut acc = 0u128;
            for (p, e) in &terms {
                if *p == top {
                    if *e != 1 {
                        return fail(format!("{what}: top place does not occur exactly once"));
                    }
                } else if !cols.contains_key(p) {
                    return fail(format!("{what}: place {} is not fixed by the small rows", place_label(&m.curve, p)));
                }
                acc = (acc + int::mulmod(mod_mult(*e, ell), log_of(&values, p, m, &what)?, ell)) % ell;
            }
            if !terms.iter().any(|(p, _)| *p == top) {
                return fail(format!("{what}: top place does not occur"));
            }
            if acc != rhs {
                return fail(format!("{what}: relation does not hold for the stated logs"));
            }
            rows_checked += 1;
        }

        // Descent nodes, children before parents.
        for (i, nd) in cert.nodes.iter().enumerate() {
            let place = rp.place(&nd.place, &format!("nodes[{i}]"))?;
            let what = format!("nodes[{i}] (place {})", place_label(&m.curve, &place));
            let rel = Relation::from_doc(m, &nd.relation).map_err(|e| Error::Verify(format!("{what}: {e}")))?;
            rel.verify(m).map_err(|e| Error::Verify(format!("{what}: {e}")))?;
            let (input, rhs) = rel.normed(m);
            if input.terms.len() != 1 || input.terms.get(&place) != Some(&1) {
                return fail(format!("{what}: relation input does not norm to the place"));
            }
            let log_kappa = int_field(&what, &nd.log_kappa)?;
            if log_kappa != rp.logs.log(m.base(), &rel.kappa) % ell {
                return fail(format!("{what}: log of the constant is wrong"));
            }
            let mut v = log_kappa;
            for (p, e) in rhs.terms.iter().filter(|(p, _)| !p.is_infinity()) {
                v = (v + int::mulmod(mod_mult(*e, ell), log_of(&values, p, m, &what)?, ell)) % ell;
            }
            if int_field(&what, &nd.log)? != v {
                return fail(format!("{what}: stated log does not match its relation"));
            }
            if values.insert(place, v).is_some_and(|old| old != v) {
                return fail(format!("{what}: place already has a different log"));
            }
        }

        let lift = cert.lift.as_ref().ok_or_else(|| Error::Verify("lift: missing".into()))?;
        let shift = int_field("lift", &lift.shift)?;
        let lc_log = int_field("lift", &lift.lc_log)?;
        let f = rp.func(&lift.function, "lift")?;
        let place = rp.place(&lift.place, "lift")?;
        let div = rp.lifted(&f, &big.mul(&h, &big.pow(&g, shift)), lc_log, "lift")?;
        if div.terms.len() != 1 || div.terms.get(&place) != Some(&1) {
            return fail("lift: divisor is not a single place".into());
        }
        let root = log_of(&values, &place, m, "lift")?;
        if (root + lc_log % ell + ell - shift % ell) % ell != x_ell {
            return fail("answer_mod_ell: does not match the lift and the descent".into());
        }
    } else if x_ell != 0 {
        return fail("answer_mod_ell: must be 0 when ℓ = 1".into());
    }
    if big.pow(&g, answer) != h {
        return fail("answer: g^x does not equal h".into());
    }
    if cert.digest != cert.body_digest() {
        return fail("digest: does not match the certificate body".into());
    }
    Ok(VerifyReport { ok: true, answer: answer.to_string(), rows_checked, nodes_checked: cert.nodes.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dlp;

    fn solved() -> Certificate {
        let m = Model::build(3, 5, Some(1)).unwrap();
        let policy = Policy { lift_level: Some(3), ..Policy::default() };
        let g = dlp::default_generator(&m);
        let h = m.field().pow(&g, 123);
        let run = dlp::dlog(&m, &g, &h, &policy, 5).unwrap();
        assert_eq!(run.answer, 123);
        Certificate::build(&m, &run, 5, &policy)
    }

    #[test]
    fn certificate_round_trips_and_verifies() {
        let cert = solved();
        let back = Certificate::from_json(&cert.to_json()).unwrap();
        assert_eq!(back, cert);
        let rep = verify(&back).unwrap();
        assert_eq!(rep.answer, "123");
        assert!(rep.nodes_checked > 0);
    }

    #[test]
    fn perturbed_node_log_is_identified() {
        let mut cert = solved();
        let last = cert.nodes.len() - 1;
        let v: u128 = cert.nodes[last].log.parse().unwrap();
        cert.nodes[last].log = ((v + 1) % 242).to_string();
        let err = verify(&cert).unwrap_err().to_string();
        assert!(err.contains(&format!("nodes[{last}]")), "{err}");
    }

    #[test]
    fn perturbed_answer_fails() {
        let mut cert = solved();
        cert.answer = "124".into();
        assert!(verify(&cert).is_err());
    }
}
