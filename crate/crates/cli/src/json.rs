//! JSON encodings of library values. Field order and number formatting are
//! fixed so equal inputs produce byte-identical output.

use aspectra_core::echelon::TildeEchelonForm;
use aspectra_core::lattice::LatticeElement;
use aspectra_core::poly::{MultiPoly, PitVerdict};
use aspectra_core::spectra::{ProbeSet, Report};
use aspectra_core::words::{MoveTrace, Word};
use aspectra_core::Rational;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

/// `"num/den"`, always with an explicit denominator.
pub fn rational(q: &Rational) -> Value {
    Value::String(format!("{}/{}", q.numer(), q.denom()))
}

/// Space-separated letters; the empty word is `"1"`.
pub fn word(w: &Word) -> Value {
    Value::String(if w.is_empty() { "1".to_string() } else { w.to_string() })
}

pub fn lattice(l: &LatticeElement) -> Value {
    json!(l.0)
}

/// `{arity, terms: [{exp, coeff}]}` with terms in increasing graded-lex
/// order.
pub fn poly(p: &MultiPoly) -> Value {
    let terms: Vec<Value> = p.terms().map(|(m, c)| json!({ "exp": m.exponents(), "coeff": rational(c) })).collect();
    json!({ "arity": p.arity(), "terms": terms })
}

pub fn tilde_form(t: &TildeEchelonForm) -> Value {
    let blocks: Vec<Value> = t.block_part.blocks().iter().map(|b| json!([b.start, b.end])).collect();
    json!({ "blocks": blocks, "exponents": lattice(&t.lattice_part) })
}

pub fn trace(t: &MoveTrace) -> Value {
    let steps: Vec<Value> = t.steps.iter().map(|(m, w)| json!({ "move": m.to_string(), "word": word(w) })).collect();
    json!({ "initial": word(&t.initial), "steps": steps })
}

pub fn probe_set(p: &ProbeSet) -> Value {
    let words: Vec<Value> = p.words().iter().map(word).collect();
    json!({ "kind": p.kind().to_string(), "rank": p.rank(), "size": p.len(), "words": words })
}

/// Base-10 logarithm of a positive rational, accurate to f64 precision.
pub fn log10(q: &Rational) -> Option<f64> {
    if q.is_zero() {
        return None;
    }
    let digits = |v: &num_bigint::BigInt| {
        let s = v.magnitude().to_string();
        let lead: f64 = s[..s.len().min(15)].parse().expect("decimal digits");
        lead.log10() + (s.len() - s.len().min(15)) as f64
    };
    Some(digits(q.numer()) - digits(q.denom()))
}

pub fn pit(v: &PitVerdict) -> Value {
    let bound = v.error_bound();
    json!({
        "equal": v.equal,
        "trials": v.trials,
        "prime": v.prime,
        "degreeBound": v.degree_bound,
        "errorBound": rational(&bound),
        "log10ErrorBound": log10(&bound),
        "errorBoundApprox": bound.to_f64(),
        "witness": v.witness,
    })
}

pub fn report(r: &Report, probe: &ProbeSet) -> Value {
    let violations: Vec<Value> = r
        .violations
        .iter()
        .map(|v| json!({ "severity": if v.critical { "CRITICAL" } else { "warning" }, "message": v.message }))
        .collect();
    json!({
        "probeSet": probe_set(probe),
        "dims": [r.dims.0, r.dims.1],
        "divisorEqual": r.divisor_equal,
        "method": r.method.to_string(),
        "pit": r.pit.as_ref().map(pit),
        "charBudget": r.char_budget,
        "ballSize": r.ball_size,
        "charEqual": r.char_equal,
        "charWitness": r.char_witness.as_ref().map(word),
        "consistent": r.consistent(),
        "violations": violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use aspectra_core::poly::MultiPoly;

    #[test]
    fn polynomial_encoding() {
        let x = MultiPoly::var(2, 0);
        let p = &(&x * &x) - &MultiPoly::one(2);
        assert_eq!(
            poly(&p).to_string(),
            r#"{"arity":2,"terms":[{"coeff":"-1/1","exp":[0,0]},{"coeff":"1/1","exp":[2,0]}]}"#
        );
    }

    #[test]
    fn log10_of_small_bounds() {
        let q = Rational::new(1.into(), num_bigint::BigInt::from(10).pow(70));
        assert!((log10(&q).unwrap() + 70.0).abs() < 1e-9);
        let q = Rational::new(3.into(), 7.into());
        assert!((log10(&q).unwrap() - (3.0f64 / 7.0).log10()).abs() < 1e-12);
    }
}
