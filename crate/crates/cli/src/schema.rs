//! Strict JSON input schemas. Every file carries "schema": 1 and unknown
//! fields are rejected, so fixture typos fail loudly.

use serde::Deserialize;

use npc_core::arith::{FieldDesc, Mat, Matrix, ScalarGrammar};
use npc_core::error::{Error, Result};
use npc_core::group::MatGroup;
use npc_core::valuations::RingDesc;

fn check_schema(schema: u32) -> Result<()> {
    if schema != 1 {
        return Err(Error::parse(format!("unsupported schema version {schema}")));
    }
    Ok(())
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum LevelledStrings {
    Flat(Vec<String>),
    PerLevel(Vec<Vec<String>>),
}

impl Default for LevelledStrings {
    fn default() -> Self {
        LevelledStrings::Flat(vec![])
    }
}

impl LevelledStrings {
    fn into_levels(self, levels: usize) -> Result<Vec<Vec<String>>> {
        match self {
            LevelledStrings::Flat(v) => {
                if levels <= 1 || v.is_empty() {
                    let mut out = vec![vec![]; levels.max(1)];
                    out[0] = v;
                    Ok(out)
                } else {
                    Err(Error::parse(
                        "with two transcendentals, use a list per level (e.g. [[\"t\"],[\"u\"]])",
                    ))
                }
            }
            LevelledStrings::PerLevel(v) => {
                if v.len() > levels {
                    return Err(Error::parse("more levels than transcendentals"));
                }
                let mut out = v;
                out.resize(levels.max(1), vec![]);
                Ok(out)
            }
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingFile {
    pub schema: u32,
    #[serde(rename = "char")]
    pub characteristic: u64,
    pub transcendentals: Vec<String>,
    #[serde(default)]
    pub inverted: LevelledStrings,
    #[serde(default)]
    pub extra: Vec<String>,
}

impl RingFile {
    pub fn into_ring(self) -> Result<RingDesc> {
        check_schema(self.schema)?;
        let levels = self.transcendentals.len();
        if levels > 2 {
            return Err(Error::unsupported("at most two transcendentals are supported"));
        }
        let grammar = ScalarGrammar::for_char(self.characteristic)?;
        let vars = self.transcendentals.clone();
        let inv = self.inverted.into_levels(levels)?;
        let mut ring = RingDesc {
            p: self.characteristic,
            vars: vars.clone(),
            inverted1: vec![],
            inverted2: vec![],
            extra1: vec![],
        };
        if levels >= 1 {
            for s in &inv[0] {
                ring.inverted1.push(grammar.parse_monic_irreducible(
                    s,
                    &vars[0],
                    npc_core::DEFAULT_SEED,
                )?);
            }
            for s in &self.extra {
                ring.extra1.push(grammar.parse_scalar_var(s, &vars[0])?);
            }
        } else if !self.extra.is_empty() {
            return Err(Error::parse("extra generators need a transcendental"));
        }
        if levels == 2 {
            for s in &inv[1] {
                ring.inverted2.push(parse_level2_poly(&grammar, s, &vars)?);
            }
        }
        Ok(ring)
    }
}

/// Level-2 polynomials: terms in the second variable whose coefficients use
/// the level-1 grammar, e.g. "u", "u+s", "(1+s)*u^2+s".
fn parse_level2_poly(
    grammar: &ScalarGrammar,
    input: &str,
    vars: &[String],
) -> Result<npc_core::Poly<npc_core::FieldElem>> {
    use npc_core::Field;
    let v1 = &vars[0];
    let v2 = &vars[1];
    let cleaned: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    // split into terms at top level (outside parentheses)
    let mut terms: Vec<String> = vec![];
    let mut cur = String::new();
    let mut depth = 0i32;
    for ch in cleaned.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' if depth == 0 && !cur.is_empty() => {
                terms.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    if !cur.is_empty() {
        terms.push(cur);
    }
    let zero = grammar.parse_scalar("0")?;
    let mut coeffs: Vec<npc_core::FieldElem> = vec![];
    for term in terms {
        let (coeff_str, power) = if let Some(pos) = term.find(v2.as_str()) {
            let head = &term[..pos];
            let tail = &term[pos + v2.len()..];
            let power = if tail.is_empty() {
                1usize
            } else if let Some(e) = tail.strip_prefix('^') {
                e.parse::<usize>().map_err(|_| Error::parse(format!("bad exponent in '{term}'")))?
            } else {
                return Err(Error::parse(format!("unexpected trailing text in '{term}'")));
            };
            (head.strip_suffix('*').unwrap_or(head), power)
        } else {
            (term.as_str(), 0usize)
        };
        let c = if coeff_str.is_empty() {
            zero.one_like()
        } else {
            let inner = coeff_str
                .strip_prefix('(')
                .and_then(|s| s.strip_suffix(')'))
                .unwrap_or(coeff_str);
            grammar.parse_scalar_var(inner, v1)?
        };
        if coeffs.len() <= power {
            coeffs.resize(power + 1, zero.clone());
        }
        coeffs[power] = coeffs[power].add(&c);
    }
    Ok(npc_core::Poly::from_coeffs(coeffs))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub schema: u32,
    #[serde(rename = "char")]
    pub characteristic: u64,
    pub entries: Vec<Vec<String>>,
}

impl MatrixFile {
    pub fn into_matrix(self) -> Result<(Matrix, FieldDesc)> {
        check_schema(self.schema)?;
        let grammar = ScalarGrammar::for_char(self.characteristic)?;
        let mat = parse_matrix(&grammar, &self.entries)?;
        Ok((mat, grammar.field().clone()))
    }
}

pub fn parse_matrix(grammar: &ScalarGrammar, entries: &[Vec<String>]) -> Result<Matrix> {
    let n = entries.len();
    if n == 0 || entries.iter().any(|row| row.len() != n) {
        return Err(Error::parse("matrix entries must form a nonempty square array"));
    }
    let mut flat = vec![];
    for row in entries {
        for s in row {
            flat.push(grammar.parse_scalar(s)?);
        }
    }
    Ok(Mat::new(n, flat))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupFile {
    pub schema: u32,
    #[serde(rename = "char")]
    pub characteristic: u64,
    #[serde(default)]
    pub name: Option<String>,
    pub gens: Vec<Vec<Vec<String>>>,
}

impl GroupFile {
    pub fn into_group(self) -> Result<MatGroup> {
        check_schema(self.schema)?;
        let grammar = ScalarGrammar::for_char(self.characteristic)?;
        let gens = self
            .gens
            .iter()
            .map(|g| parse_matrix(&grammar, g))
            .collect::<Result<Vec<_>>>()?;
        MatGroup::new(gens, grammar.field().clone(), self.name)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisFile {
    pub schema: u32,
    #[serde(rename = "char")]
    pub characteristic: u64,
    pub basis: Vec<Vec<Vec<String>>>,
}

impl BasisFile {
    pub fn into_matrices(self) -> Result<Vec<Matrix>> {
        check_schema(self.schema)?;
        let grammar = ScalarGrammar::for_char(self.characteristic)?;
        self.basis.iter().map(|g| parse_matrix(&grammar, g)).collect()
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationFile {
    pub schema: u32,
    pub free_rank: usize,
    #[serde(default)]
    pub torsion: Vec<u64>,
    pub images: Vec<Vec<i64>>,
}

impl PresentationFile {
    pub fn into_presentation(self) -> Result<npc_core::blocks::AbelianPresentation> {
        check_schema(self.schema)?;
        npc_core::blocks::AbelianPresentation::new(self.free_rank, self.torsion, self.images)
    }
}

pub fn load_json<T: serde::de::DeserializeOwned>(path: &str) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::parse(format!("cannot read {path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| Error::parse(format!("{path}: {e}")))
}

/// Group source: a JSON path or "fixture:<name>".
pub fn load_group(source: &str) -> Result<MatGroup> {
    if let Some(name) = source.strip_prefix("fixture:") {
        return npc_core::distortion::fixtures::fixture(name);
    }
    let file: GroupFile = load_json(source)?;
    file.into_group()
}
