use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use crate::algebra::{Rat, RatVec};

/// A point together with the exact value some form takes there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub point: RatVec,
    #[serde(serialize_with = "ser_rat")]
    pub value: Rat,
}

/// Outcome of an exact decision about a quadratic or quartic form.
///
/// `Fails` carries a point at which the claimed property visibly breaks, so
/// a consumer can re-check it without trusting the decider.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails(Witness),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails(w) => Some(w),
        }
    }
}

pub fn ser_rat<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

pub fn ser_opt_rat<S: Serializer>(r: &Option<Rat>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_none(),
    }
}

impl Serialize for RatVec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.dim()))?;
        for x in self.iter() {
            seq.serialize_element(&x.to_string())?;
        }
        seq.end()
    }
}
