//! Slope specification files (TOML).

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use slopecheck::rational::{fmt_q, parse_q};
use slopecheck::slope::Slope;
use slopecheck::{Error, NumberField, Result, Q};

/// Number field Q(α) given by a minimal polynomial (ascending
/// coefficients) and an interval isolating the chosen real root.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub minpoly: Vec<String>,
    pub root_interval: [String; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlopeSpec {
    pub name: String,
    pub n: usize,
    pub d: usize,
    /// d columns of n entries; each entry lists its coefficients in
    /// 1, α, α², … .
    pub generators: Vec<Vec<Vec<String>>>,
    /// Shift γ of the unit cube, x ↦ x + γ, selecting the tiling.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offset: Option<Vec<String>>,
    /// Grassmann coordinate set to 1 in the verdict.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalization: Option<String>,
    /// Seed for random offsets and sampling.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub field: FieldSpec,
}

fn qs(xs: &[String]) -> Result<Vec<Q>> {
    xs.iter().map(|x| parse_q(x)).collect()
}

impl SlopeSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let spec: SlopeSpec = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: &str) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
        Self::parse(&text)
    }

    fn validate(&self) -> Result<()> {
        if self.d == 0 || self.d >= self.n {
            return Err(Error::Parse(format!("need 0 < d < n, got n = {}, d = {}", self.n, self.d)));
        }
        if self.generators.len() != self.d || self.generators.iter().any(|c| c.len() != self.n) {
            return Err(Error::Parse(format!("generators must be {} columns of {} entries", self.d, self.n)));
        }
        if let Some(o) = &self.offset {
            if o.len() != self.n {
                return Err(Error::Parse(format!("offset must have {} entries", self.n)));
            }
        }
        Ok(())
    }

    /// Canonical text; parsing it back gives an identical spec.
    pub fn to_canonical(&self) -> String {
        toml::to_string(self).expect("spec serializes")
    }

    pub fn sha256(&self) -> String {
        let digest = Sha256::digest(self.to_canonical().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn to_slope(&self) -> Result<Slope> {
        let f = NumberField::new(
            qs(&self.field.minpoly)?,
            (parse_q(&self.field.root_interval[0])?, parse_q(&self.field.root_interval[1])?),
        )?;
        let cols: Vec<Vec<Vec<Q>>> = self
            .generators
            .iter()
            .map(|c| c.iter().map(|e| qs(e)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        let offset = self.offset.as_deref().map(qs).transpose()?;
        Slope::from_coeffs(&f, &cols, offset)
    }

    pub fn offset_q(&self) -> Result<Option<Vec<Q>>> {
        self.offset.as_deref().map(qs).transpose()
    }
}

pub fn q_strings(xs: &[Q]) -> Vec<String> {
    xs.iter().map(fmt_q).collect()
}
