//! Bracket tables of generator families: JSON documents, golden references
//! and row-by-row comparison.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diffpoly::{DiffPoly, GeneratorSpace};
use crate::lambda::{LambdaBracket, LambdaPoly};
use crate::scalar::Scalar;
use crate::superalgebra::LieSuperalgebra;
use crate::text::{self, ParseError};
use crate::wred::{self, GeneratorFamily, ReductionContext, TableEntry, WError};

#[derive(Debug, Error)]
pub enum TableError {
    #[error("malformed table document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("in {context}: {source}")]
    Parse {
        context: String,
        #[source]
        source: ParseError,
    },
    #[error("unknown generator label {0:?}")]
    UnknownLabel(String),
    #[error("table is for {found}, expected {expected}")]
    AlgebraMismatch { found: String, expected: String },
    #[error(transparent)]
    W(#[from] WError),
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct LambdaTerm {
    pub degree: u32,
    pub expr: String,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct EntryDoc {
    pub left: String,
    pub right: String,
    pub lambda_terms: Vec<LambdaTerm>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct GeneratorDoc {
    pub label: String,
    pub expr: String,
}

/// `{algebra, k, generators?, entries}`; expressions use the text grammar.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct TableDoc {
    pub algebra: String,
    pub k: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<GeneratorDoc>,
    pub entries: Vec<EntryDoc>,
}

const SPO21_GOLDEN: &str = include_str!("../golden/spo21.json");
const SPO23_GOLDEN: &str = include_str!("../golden/spo23.json");

/// Reference table shipped for a builtin algebra, if any.
pub fn golden(name: &str) -> Option<TableDoc> {
    let src = match name {
        "spo(2|1)" | "spo21" => SPO21_GOLDEN,
        "spo(2|3)" | "spo23" => SPO23_GOLDEN,
        _ => return None,
    };
    Some(TableDoc::from_json(src).expect("shipped golden tables parse"))
}

fn lambda_doc(p: &LambdaPoly) -> Vec<LambdaTerm> {
    text::lambda_terms(p)
        .into_iter()
        .map(|(degree, expr)| LambdaTerm { degree, expr })
        .collect()
}

impl TableDoc {
    pub fn from_json(src: &str) -> Result<Self, TableError> {
        Ok(serde_json::from_str(src)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table documents serialize")
    }

    /// Document for an engine table, with the family's representatives.
    pub fn from_engine(ctx: &ReductionContext, fam: &GeneratorFamily, table: &[TableEntry]) -> Self {
        let gens = fam.elements().iter().map(|e| e.representative());
        TableDoc::from_labeled(ctx.algebra().name(), ctx.level(), fam.labels(), gens, table)
    }

    /// Document from labels, their representatives and table rows indexed by label.
    pub fn from_labeled<'a>(
        algebra: &str,
        k: &Scalar,
        labels: &[String],
        generators: impl IntoIterator<Item = &'a DiffPoly>,
        table: &[TableEntry],
    ) -> Self {
        TableDoc {
            algebra: algebra.to_string(),
            k: k.to_string(),
            generators: labels
                .iter()
                .zip(generators)
                .map(|(l, e)| GeneratorDoc {
                    label: l.clone(),
                    expr: text::render_diffpoly(e),
                })
                .collect(),
            entries: table
                .iter()
                .map(|e| EntryDoc {
                    left: labels[e.left].clone(),
                    right: labels[e.right].clone(),
                    lambda_terms: lambda_doc(&e.value),
                })
                .collect(),
        }
    }

    /// Parses and re-renders every expression; used to check canonical output.
    pub fn canonicalize(&self, space: &Arc<GeneratorSpace>) -> Result<TableDoc, TableError> {
        let mut out = self.clone();
        for e in &mut out.entries {
            let p = entry_value(space, e)?;
            e.lambda_terms = lambda_doc(&p);
        }
        Ok(out)
    }

    /// The generators of the document as a family over `alg`.
    pub fn family(&self, ctx: &ReductionContext) -> Result<GeneratorFamily, TableError> {
        let alg = ctx.algebra();
        if !same_algebra(alg, &self.algebra) {
            return Err(TableError::AlgebraMismatch {
                found: self.algebra.clone(),
                expected: alg.name().to_string(),
            });
        }
        let mut named = Vec::new();
        for g in &self.generators {
            let p = text::parse_diffpoly(alg.space(), &g.expr).map_err(|source| TableError::Parse {
                context: g.label.clone(),
                source,
            })?;
            named.push((g.label.clone(), p));
        }
        Ok(wred::family_from_polys(ctx, named)?)
    }
}

fn same_algebra(alg: &LieSuperalgebra, name: &str) -> bool {
    alg.name() == name || crate::superalgebra::builtin(name).map(|b| b.name() == alg.name()).unwrap_or(false)
}

/// Parses the λ-polynomial of one entry over the label space.
pub fn entry_value(space: &Arc<GeneratorSpace>, e: &EntryDoc) -> Result<LambdaPoly, TableError> {
    let terms: Vec<(u32, String)> = e.lambda_terms.iter().map(|t| (t.degree, t.expr.clone())).collect();
    text::lambda_from_terms(space, &terms).map_err(|source| TableError::Parse {
        context: format!("{{{} λ {}}}", e.left, e.right),
        source,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Match,
    EngineDiffers { engine: String, golden: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowComparison {
    pub left: String,
    pub right: String,
    pub verdict: Verdict,
}

impl RowComparison {
    pub fn is_match(&self) -> bool {
        self.verdict == Verdict::Match
    }
}

impl fmt::Display for RowComparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.verdict {
            Verdict::Match => write!(f, "{{{} λ {}}} : MATCH", self.left, self.right),
            Verdict::EngineDiffers { engine, golden } => write!(
                f,
                "{{{} λ {}}} : ENGINE-DIFFERS\n  engine: {}\n  golden: {}",
                self.left, self.right, engine, golden
            ),
        }
    }
}

/// Compares each golden row with the engine's bracket of the two labels.
/// Rows are oriented as in the golden document; the engine side is computed
/// through its label bracket, so either orientation of a pair can be given.
pub fn compare(engine: &LambdaBracket, golden: &TableDoc) -> Result<Vec<RowComparison>, TableError> {
    let space = engine.space().clone();
    let var = |l: &str| -> Result<DiffPoly, TableError> {
        space
            .lookup(l)
            .map(|i| DiffPoly::var(&space, i))
            .ok_or_else(|| TableError::UnknownLabel(l.to_string()))
    };
    let mut out = Vec::new();
    for e in &golden.entries {
        let want = entry_value(&space, e)?;
        let got = engine
            .bracket(&var(&e.left)?, &var(&e.right)?)
            .map_err(WError::from)?;
        let verdict = if got == want {
            Verdict::Match
        } else {
            Verdict::EngineDiffers {
                engine: got.to_string(),
                golden: want.to_string(),
            }
        };
        out.push(RowComparison {
            left: e.left.clone(),
            right: e.right.clone(),
            verdict,
        });
    }
    Ok(out)
}

/// Text lines of a table: one `{a λ b} = value` per entry.
pub fn render_text(fam: &GeneratorFamily, table: &[TableEntry]) -> Vec<String> {
    render_text_labeled(fam.labels(), table)
}

pub fn render_text_labeled(labels: &[String], table: &[TableEntry]) -> Vec<String> {
    table
        .iter()
        .map(|e| format!("{{{} λ {}}} = {}", labels[e.left], labels[e.right], e.value))
        .collect()
}

/// LaTeX `aligned` body of a table.
pub fn render_latex(fam: &GeneratorFamily, table: &[TableEntry]) -> Vec<String> {
    render_latex_labeled(fam.label_space(), table)
}

/// Same as [`render_latex`] with the labels taken from `label_space`.
pub fn render_latex_labeled(label_space: &Arc<GeneratorSpace>, table: &[TableEntry]) -> Vec<String> {
    let name = |i: usize| text::render_latex_diffpoly(&DiffPoly::var(label_space, i));
    table
        .iter()
        .map(|e| {
            format!(
                "& \\{{{}\\, {{}}_\\lambda\\, {}\\}} = {} \\\\",
                name(e.left),
                name(e.right),
                text::render_latex(&e.value)
            )
        })
        .collect()
}
