//! JSON file formats for distributions and channels, and number formatting
//! for delimited output.
//!
//! Pair: `{"labels_x": [..], "labels_y": [..], "pmf": [[p(x0,y0), ..], ..]}` with
//! optional labels (default `0, 1, ...`). Triple: adds `labels_u` and stores
//! `pmf` as one `X × Y` matrix per `u`. Channel: `{"kernel": [..]}` indexed
//! `[x][y][w]`. Numbers are written in shortest round-trip form; re-reading a
//! written file changes masses by at most the rounding of renormalization.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::dist::{Alphabet, Channel, JointDist2, JointDist3};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum DistFile {
    Pair(JointDist2),
    Triple(JointDist3),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairRecord {
    #[serde(default)]
    labels_x: Option<Vec<f64>>,
    #[serde(default)]
    labels_y: Option<Vec<f64>>,
    pmf: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TripleRecord {
    #[serde(default)]
    labels_x: Option<Vec<f64>>,
    #[serde(default)]
    labels_y: Option<Vec<f64>>,
    #[serde(default)]
    labels_u: Option<Vec<f64>>,
    pmf: Vec<Vec<Vec<f64>>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChannelRecord {
    kernel: Vec<Vec<Vec<f64>>>,
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

fn alphabet(labels: Option<Vec<f64>>, n: usize) -> Result<Alphabet> {
    match labels {
        Some(l) => Alphabet::new(l),
        None => Ok(Alphabet::indexed(n)),
    }
}

/// Reads a pair or triple; the nesting depth of `pmf` decides which.
pub fn parse_dist(text: &str) -> Result<DistFile> {
    let value: Value = serde_json::from_str(text).map_err(parse_err)?;
    let depth = {
        let mut depth = 0;
        let mut v = value
            .get("pmf")
            .ok_or_else(|| Error::Parse("missing field `pmf`".into()))?;
        while let Some(first) = v.as_array().and_then(|a| a.first()) {
            depth += 1;
            v = first;
        }
        depth
    };
    match depth {
        2 => {
            let r: PairRecord = serde_json::from_value(value).map_err(parse_err)?;
            let nx = r.pmf.len();
            let ny = r.pmf.first().map_or(0, Vec::len);
            let d = JointDist2::from_labeled_rows(
                alphabet(r.labels_x, nx)?,
                alphabet(r.labels_y, ny)?,
                &r.pmf,
            )?;
            Ok(DistFile::Pair(d))
        }
        3 => {
            let r: TripleRecord = serde_json::from_value(value).map_err(parse_err)?;
            let nu = r.pmf.len();
            let nx = r.pmf[0].len();
            let ny = r.pmf[0].first().map_or(0, Vec::len);
            let d = JointDist3::from_u_slices(
                alphabet(r.labels_x, nx)?,
                alphabet(r.labels_y, ny)?,
                alphabet(r.labels_u, nu)?,
                &r.pmf,
            )?;
            Ok(DistFile::Triple(d))
        }
        _ => Err(Error::Parse(
            "`pmf` must be a matrix or an array of matrices".into(),
        )),
    }
}

pub fn parse_pair(text: &str) -> Result<JointDist2> {
    match parse_dist(text)? {
        DistFile::Pair(d) => Ok(d),
        DistFile::Triple(_) => Err(Error::ShapeMismatch(
            "expected a pair distribution, got a triple".into(),
        )),
    }
}

pub fn parse_channel(text: &str) -> Result<Channel> {
    let r: ChannelRecord = serde_json::from_str(text).map_err(parse_err)?;
    Channel::from_nested(&r.kernel)
}

fn to_json<T: Serialize>(record: &T) -> String {
    let mut s = serde_json::to_string(record).expect("finite numbers serialize");
    s.push('\n');
    s
}

pub fn pair_to_json(d: &JointDist2) -> String {
    to_json(&PairRecord {
        labels_x: Some(d.alphabet_x().labels().to_vec()),
        labels_y: Some(d.alphabet_y().labels().to_vec()),
        pmf: d.rows(),
    })
}

pub fn triple_to_json(d: &JointDist3) -> String {
    let pmf = (0..d.nu())
        .map(|u| {
            (0..d.nx())
                .map(|x| (0..d.ny()).map(|y| d.p(x, y, u)).collect())
                .collect()
        })
        .collect();
    to_json(&TripleRecord {
        labels_x: Some(d.alphabet_x().labels().to_vec()),
        labels_y: Some(d.alphabet_y().labels().to_vec()),
        labels_u: Some(d.alphabet_u().labels().to_vec()),
        pmf,
    })
}

pub fn channel_to_json(c: &Channel) -> String {
    to_json(&ChannelRecord {
        kernel: c.to_nested(),
    })
}

/// `x` with 12 significant digits, like C's `%.12g`.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}
