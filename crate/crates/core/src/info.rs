//! Entropy and mutual information on finite pmfs. Values are in bits unless a
//! [`Unit`] says otherwise.

use crate::dist::{Channel, JointDist2};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Unit {
    #[default]
    Bits,
    Nats,
}

impl Unit {
    pub fn from_bits(self, bits: f64) -> f64 {
        match self {
            Unit::Bits => bits,
            Unit::Nats => bits * std::f64::consts::LN_2,
        }
    }

    pub fn from_nats(self, nats: f64) -> f64 {
        match self {
            Unit::Bits => nats / std::f64::consts::LN_2,
            Unit::Nats => nats,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Unit::Bits => "bits",
            Unit::Nats => "nats",
        }
    }
}

impl std::fmt::Display for Unit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Unit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bits" => Ok(Unit::Bits),
            "nats" => Ok(Unit::Nats),
            other => Err(Error::Parse(format!("unknown unit '{other}'"))),
        }
    }
}

/// `-t log2 t` with `0 log 0 = 0`.
#[inline]
pub(crate) fn neg_t_log2_t(t: f64) -> f64 {
    if t > 0.0 {
        -t * t.log2()
    } else {
        0.0
    }
}

/// Shannon entropy (bits) of a vector of masses.
pub fn entropy(masses: &[f64]) -> f64 {
    masses.iter().copied().map(neg_t_log2_t).sum()
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!("{name}={p} not in [0,1]")))
    }
}

/// Binary entropy function.
pub fn h2(p: f64) -> Result<f64> {
    check_probability("p", p)?;
    Ok(neg_t_log2_t(p) + neg_t_log2_t(1.0 - p))
}

/// Quaternary entropy function.
pub fn h4(a: f64, b: f64, c: f64, d: f64) -> Result<f64> {
    for (name, v) in [("a", a), ("b", b), ("c", c), ("d", d)] {
        check_probability(name, v)?;
    }
    let total = a + b + c + d;
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::OutOfRange(format!(
            "arguments sum to {total}, expected 1"
        )));
    }
    Ok(entropy(&[a, b, c, d]))
}

/// Joint entropy `H(X, Y)`.
pub fn joint_entropy(d: &JointDist2) -> f64 {
    entropy(d.pmf())
}

/// `I(X; Y)` in bits, clamped at 0.
pub fn mutual_information(d: &JointDist2) -> f64 {
    let (px, py) = (d.marginal_x(), d.marginal_y());
    let mut acc = 0.0;
    for (x, &pxv) in px.iter().enumerate() {
        for (y, &pyv) in py.iter().enumerate() {
            let p = d.p(x, y);
            if p > 0.0 {
                acc += p * (p / (pxv * pyv)).log2();
            }
        }
    }
    acc.max(0.0)
}

/// `I(X, Y; W)` in bits for `W` drawn from `channel`.
pub fn mi_xy_w(d: &JointDist2, channel: &Channel) -> Result<f64> {
    let joint = d.attach_channel(channel)?;
    let nw = channel.output_size();
    let pw = joint.marginal_u();
    let mut acc = 0.0;
    for (xy, &pxy) in d.pmf().iter().enumerate() {
        for w in 0..nw {
            let p = joint.pmf()[xy * nw + w];
            if p > 0.0 {
                acc += p * (p / (pxy * pw[w])).log2();
            }
        }
    }
    Ok(acc.max(0.0))
}
