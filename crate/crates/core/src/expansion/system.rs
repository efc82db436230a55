//! Generated systems and their interchange formats.
//!
//! JSON layout:
//!
//! ```json
//! {
//!   "spec": {"stages": 2, "operators": 2, "ansatz": "plain", "fixed": {}, "order": 2},
//!   "blocks": [{"q": 1, "conditions": [{"word": "A", "poly": "a[1]+a[2]-1"}, …]}, …],
//!   "leading": {"q": 3, "conditions": […]}
//! }
//! ```
//!
//! `leading` is omitted when not requested. Polynomials use the canonical
//! text grammar.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{Ansatz, ExpansionError, SchemeSpec};
use crate::poly::{format_rational, parse_rational, CoeffPoly, Rational, Unknown};
use crate::words::Word;

/// One equation `poly = 0`, labelled by the Lyndon word it was read off.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Condition {
    pub word: Word,
    pub poly: CoeffPoly,
}

/// All conditions of one order `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionBlock {
    pub q: usize,
    pub conditions: Vec<Condition>,
}

impl ConditionBlock {
    pub fn len(&self) -> usize {
        self.conditions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.conditions.is_empty()
    }

    pub fn polys(&self) -> impl Iterator<Item = &CoeffPoly> {
        self.conditions.iter().map(|c| &c.poly)
    }

    pub fn get(&self, word: &Word) -> Option<&CoeffPoly> {
        self.conditions
            .iter()
            .find(|c| c.word == *word)
            .map(|c| &c.poly)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderConditionSystem {
    pub spec: SchemeSpec,
    pub order: usize,
    pub blocks: Vec<ConditionBlock>,
    pub leading: Option<ConditionBlock>,
}

/// Coefficients `γ_k` of the leading local error term of an order-`p` scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeadingErrorTerm {
    pub order: usize,
    pub block: ConditionBlock,
}

impl OrderConditionSystem {
    pub fn block(&self, q: usize) -> Option<&ConditionBlock> {
        self.blocks.iter().find(|b| b.q == q)
    }

    pub fn conditions(&self) -> impl Iterator<Item = (usize, &Condition)> {
        self.blocks
            .iter()
            .flat_map(|b| b.conditions.iter().map(move |c| (b.q, c)))
    }

    pub fn with_leading(mut self, lead: LeadingErrorTerm) -> Self {
        self.leading = Some(lead.block);
        self
    }

    /// Plain-text listing: one `OC[q]` list per block, each preceded by a
    /// `#` comment naming the Lyndon words.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let spec = &self.spec;
        let _ = write!(
            out,
            "# stages={} operators={} ansatz={} order={}",
            spec.stages(),
            spec.operators(),
            spec.ansatz(),
            self.order
        );
        for (u, v) in spec.fixed() {
            let _ = write!(out, " {u}={}", format_rational(v));
        }
        out.push('\n');
        for b in &self.blocks {
            write_block(&mut out, "OC", b);
        }
        if let Some(lead) = &self.leading {
            write_block(&mut out, "LEAD", lead);
        }
        out
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(SystemDoc::from(self)).expect("system serializes")
    }

    pub fn to_json(&self) -> String {
        let mut s =
            serde_json::to_string_pretty(&SystemDoc::from(self)).expect("system serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, ExpansionError> {
        let doc: SystemDoc =
            serde_json::from_str(text).map_err(|e| ExpansionError::Format(e.to_string()))?;
        doc.try_into()
    }
}

fn write_block(out: &mut String, label: &str, b: &ConditionBlock) {
    let words: Vec<String> = b.conditions.iter().map(|c| c.word.to_string()).collect();
    let _ = writeln!(out, "# {label}[{}] words: {}", b.q, words.join(", "));
    let _ = writeln!(out, "{label}[{}]", b.q);
    if b.conditions.is_empty() {
        out.push_str("  []\n");
        return;
    }
    for (i, c) in b.conditions.iter().enumerate() {
        let open = if i == 0 { "  [" } else { "   " };
        let close = if i + 1 == b.conditions.len() {
            "]"
        } else {
            ","
        };
        let _ = writeln!(out, "{open}{}{close}", c.poly);
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecDoc {
    stages: usize,
    operators: usize,
    ansatz: Ansatz,
    #[serde(default, with = "fixed_map")]
    fixed: BTreeMap<Unknown, Rational>,
    order: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConditionDoc {
    word: String,
    poly: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BlockDoc {
    q: usize,
    conditions: Vec<ConditionDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemDoc {
    spec: SpecDoc,
    blocks: Vec<BlockDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    leading: Option<BlockDoc>,
}

mod fixed_map {
    use super::*;
    use serde::de::Error as _;
    use serde::ser::SerializeMap;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        map: &BTreeMap<Unknown, Rational>,
        ser: S,
    ) -> Result<S::Ok, S::Error> {
        let mut m = ser.serialize_map(Some(map.len()))?;
        for (u, v) in map {
            m.serialize_entry(&u.to_string(), &format_rational(v))?;
        }
        m.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        de: D,
    ) -> Result<BTreeMap<Unknown, Rational>, D::Error> {
        let raw: BTreeMap<String, String> = BTreeMap::deserialize(de)?;
        raw.into_iter()
            .map(|(k, v)| {
                let u: Unknown = k.parse().map_err(D::Error::custom)?;
                let r = parse_rational(&v).map_err(D::Error::custom)?;
                Ok((u, r))
            })
            .collect()
    }
}

impl From<&ConditionBlock> for BlockDoc {
    fn from(b: &ConditionBlock) -> Self {
        BlockDoc {
            q: b.q,
            conditions: b
                .conditions
                .iter()
                .map(|c| ConditionDoc {
                    word: c.word.to_string(),
                    poly: c.poly.to_string(),
                })
                .collect(),
        }
    }
}

impl From<&OrderConditionSystem> for SystemDoc {
    fn from(sys: &OrderConditionSystem) -> Self {
        SystemDoc {
            spec: SpecDoc {
                stages: sys.spec.stages(),
                operators: sys.spec.operators(),
                ansatz: sys.spec.ansatz(),
                fixed: sys.spec.fixed().clone(),
                order: sys.order,
            },
            blocks: sys.blocks.iter().map(BlockDoc::from).collect(),
            leading: sys.leading.as_ref().map(BlockDoc::from),
        }
    }
}

impl TryFrom<BlockDoc> for ConditionBlock {
    type Error = ExpansionError;

    fn try_from(b: BlockDoc) -> Result<Self, Self::Error> {
        let conditions = b
            .conditions
            .into_iter()
            .map(|c| {
                let word: Word = c
                    .word
                    .parse()
                    .map_err(|e| ExpansionError::Format(format!("word {:?}: {e}", c.word)))?;
                if word.degree() != b.q {
                    return Err(ExpansionError::Format(format!(
                        "word {word} listed in block q={}",
                        b.q
                    )));
                }
                let poly: CoeffPoly = c
                    .poly
                    .parse()
                    .map_err(|e| ExpansionError::Format(format!("poly for {word}: {e}")))?;
                Ok(Condition { word, poly })
            })
            .collect::<Result<_, _>>()?;
        Ok(ConditionBlock { q: b.q, conditions })
    }
}

impl TryFrom<SystemDoc> for OrderConditionSystem {
    type Error = ExpansionError;

    fn try_from(doc: SystemDoc) -> Result<Self, Self::Error> {
        let spec = SchemeSpec::new(doc.spec.stages, doc.spec.operators)?
            .with_ansatz(doc.spec.ansatz)?
            .with_fixed(doc.spec.fixed)?;
        let blocks = doc
            .blocks
            .into_iter()
            .map(ConditionBlock::try_from)
            .collect::<Result<_, _>>()?;
        let leading = doc.leading.map(ConditionBlock::try_from).transpose()?;
        Ok(OrderConditionSystem {
            spec,
            order: doc.spec.order,
            blocks,
            leading,
        })
    }
}
