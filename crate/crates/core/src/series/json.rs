use serde::{Deserialize, Serialize};

use super::{ExponentKey, Result, Series, SeriesError, Trunc};
use crate::scalar::Coeff;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    #[serde(rename = "P")]
    pub p: Vec<i32>,
    #[serde(rename = "Q")]
    pub q: Vec<u32>,
    pub re: String,
    pub im: String,
}

/// Interchange form of a scalar series. Exact coefficients are written as
/// integers or reduced fractions `p/q`, floats in shortest round-trip
/// decimal form; decimals and fractions are both accepted on input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesDoc {
    pub n_h: usize,
    pub n_v: usize,
    #[serde(rename = "N_h")]
    pub big_n_h: u32,
    #[serde(rename = "N_v")]
    pub big_n_v: u32,
    pub mode: String,
    pub terms: Vec<TermRecord>,
}

impl<C: Coeff> Series<C> {
    pub fn to_doc(&self) -> SeriesDoc {
        SeriesDoc {
            n_h: self.n_h(),
            n_v: self.n_v(),
            big_n_h: self.trunc().n_h,
            big_n_v: self.trunc().n_v,
            mode: C::MODE.as_str().to_string(),
            terms: self
                .terms()
                .map(|(k, c)| {
                    let (re, im) = c.re_im_strings();
                    TermRecord {
                        p: k.p.clone(),
                        q: k.q.clone(),
                        re,
                        im,
                    }
                })
                .collect(),
        }
    }

    pub fn from_doc(doc: &SeriesDoc) -> Result<Self> {
        if doc.mode != C::MODE.as_str() {
            return Err(SeriesError::ModeMismatch {
                expected: C::MODE.as_str().into(),
                found: doc.mode.clone(),
            });
        }
        let mut s = Series::zero(doc.n_h, doc.n_v, Trunc::new(doc.big_n_h, doc.big_n_v));
        for t in &doc.terms {
            let c = C::parse_parts(&t.re, &t.im).map_err(|e| SeriesError::Malformed(e.to_string()))?;
            s.add_term(ExponentKey::new(t.p.clone(), t.q.clone()), c)?;
        }
        s.cleanup();
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("series document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SeriesDoc = serde_json::from_str(text)?;
        Series::from_doc(&doc)
    }
}

/// Vector series as a JSON array of documents.
pub fn vec_to_json<C: Coeff>(f: &[Series<C>]) -> String {
    let docs: Vec<SeriesDoc> = f.iter().map(Series::to_doc).collect();
    serde_json::to_string_pretty(&docs).expect("series documents serialize")
}

pub fn vec_from_json<C: Coeff>(text: &str) -> Result<Vec<Series<C>>> {
    let docs: Vec<SeriesDoc> = serde_json::from_str(text)?;
    docs.iter().map(Series::from_doc).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ExactComplex;
    use num_complex::Complex64;

    #[test]
    fn exact_round_trip_is_bit_exact() {
        let t = Trunc::new(3, 4);
        let s = Series::<ExactComplex>::from_terms(
            1,
            2,
            t,
            [
                (ExponentKey::new(vec![-1], vec![2, 0]), ExactComplex::from_ratio(1, 3)),
                (
                    ExponentKey::new(vec![2], vec![1, 1]),
                    ExactComplex::from_parts(ExactComplex::from_ratio(-7, 2), ExactComplex::from_ratio(5, 9)),
                ),
            ],
        )
        .unwrap();
        let text = s.to_json();
        let back = Series::<ExactComplex>::from_json(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn decimal_input_and_mode_check() {
        let text = r#"{"n_h":1,"n_v":1,"N_h":2,"N_v":3,"mode":"exact",
            "terms":[{"P":[1],"Q":[2],"re":"0.25","im":"-1.5"}]}"#;
        let s = Series::<ExactComplex>::from_json(text).unwrap();
        assert_eq!(
            s.coeff_at(&[1], &[2]),
            ExactComplex::from_parts(ExactComplex::from_ratio(1, 4), ExactComplex::from_ratio(-3, 2))
        );
        assert!(matches!(
            Series::<Complex64>::from_json(text),
            Err(SeriesError::ModeMismatch { .. })
        ));
    }

    #[test]
    fn float_round_trip() {
        let t = Trunc::new(1, 2);
        let s = Series::<Complex64>::monomial(1, 1, t, vec![1], vec![2], Complex64::new(0.1, 1.0 / 3.0)).unwrap();
        let back = Series::<Complex64>::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
    }
}
