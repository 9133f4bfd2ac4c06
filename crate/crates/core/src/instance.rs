//! Index coding instances and adversary splits.
//!
//! Message indices are 0-based inside the library and 1-based in documents
//! and reports. Conversion happens only in [`InstanceDocument`].

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{GfError, PrimeField};

pub type MessageSet = BTreeSet<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("malformed instance document: {0}")]
    Malformed(String),
    #[error("q: {0}")]
    Field(#[from] GfError),
    #[error("{field}: message {index} is outside [1, {n}]")]
    IndexOutOfRange { field: String, index: usize, n: usize },
    #[error("receivers[{receiver}]: message {index} appears in both wants and has")]
    WantsOverlapHas { receiver: usize, index: usize },
    #[error("adversary: message {index} is listed in both {first} and {second}")]
    SplitOverlap { index: usize, first: &'static str, second: &'static str },
    #[error("adversary: message {index} is in none of knows/sensitive/nonsensitive")]
    SplitIncomplete { index: usize },
    #[error("adversary.sensitive: the sensitive set must not be empty")]
    EmptySensitive,
    #[error("subset index {index} is outside the instance's {n} messages")]
    SubsetOutOfRange { index: usize, n: usize },
}

/// One receiver: the messages it wants and the ones it already holds.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Receiver {
    pub wants: MessageSet,
    pub has: MessageSet,
}

impl Receiver {
    pub fn new<W, H>(wants: W, has: H) -> Self
    where
        W: IntoIterator<Item = usize>,
        H: IntoIterator<Item = usize>,
    {
        Receiver { wants: wants.into_iter().collect(), has: has.into_iter().collect() }
    }

    pub fn is_degenerate(&self) -> bool {
        self.wants.is_empty()
    }
}

/// An index coding problem over GF(q).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Instance {
    field: PrimeField,
    n: usize,
    receivers: Vec<Receiver>,
}

impl Instance {
    pub fn new(field: PrimeField, n: usize, receivers: Vec<Receiver>) -> Result<Self, InstanceError> {
        for (i, r) in receivers.iter().enumerate() {
            for (name, set) in [("wants", &r.wants), ("has", &r.has)] {
                if let Some(&index) = set.iter().find(|&&j| j >= n) {
                    return Err(InstanceError::IndexOutOfRange {
                        field: format!("receivers[{i}].{name}"),
                        index: index + 1,
                        n,
                    });
                }
            }
            if let Some(&index) = r.wants.intersection(&r.has).next() {
                return Err(InstanceError::WantsOverlapHas { receiver: i, index: index + 1 });
            }
        }
        Ok(Instance { field, n, receivers })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn q(&self) -> u32 {
        self.field.order()
    }

    pub fn message_count(&self) -> usize {
        self.n
    }

    pub fn receiver_count(&self) -> usize {
        self.receivers.len()
    }

    pub fn receivers(&self) -> &[Receiver] {
        &self.receivers
    }

    pub fn with_field(&self, field: PrimeField) -> Instance {
        Instance { field, ..self.clone() }
    }

    /// Splits every receiver wanting r >= 2 messages into r receivers with
    /// the same side information, each wanting one message.
    pub fn normalize_singleton_wants(&self) -> Instance {
        let mut receivers = Vec::with_capacity(self.receivers.len());
        for r in &self.receivers {
            if r.wants.len() <= 1 {
                receivers.push(r.clone());
            } else {
                receivers.extend(r.wants.iter().map(|&w| Receiver { wants: [w].into(), has: r.has.clone() }));
            }
        }
        Instance { field: self.field, n: self.n, receivers }
    }

    pub fn is_singleton_normalized(&self) -> bool {
        self.receivers.iter().all(|r| r.wants.len() <= 1)
    }

    /// The subproblem on the messages in `subset`, re-indexed in increasing
    /// order. Receiver count is unchanged.
    pub fn induce_subproblem(&self, subset: &MessageSet) -> Result<SubInstance, InstanceError> {
        if let Some(&index) = subset.iter().find(|&&j| j >= self.n) {
            return Err(InstanceError::SubsetOutOfRange { index: index + 1, n: self.n });
        }
        let original: Vec<usize> = subset.iter().copied().collect();
        let mut new_index = vec![usize::MAX; self.n];
        for (new, &old) in original.iter().enumerate() {
            new_index[old] = new;
        }
        let remap = |set: &MessageSet| -> MessageSet {
            set.iter().filter(|j| subset.contains(j)).map(|&j| new_index[j]).collect()
        };
        let receivers = self
            .receivers
            .iter()
            .map(|r| Receiver { wants: remap(&r.wants), has: remap(&r.has) })
            .collect();
        Ok(SubInstance {
            instance: Instance { field: self.field, n: original.len(), receivers },
            original,
        })
    }

    /// Appends the receiver that knows K ∪ S and wants U.
    pub fn extend_with_adversary_receiver(&self, split: &AdversarySplit) -> Instance {
        let mut receivers = self.receivers.clone();
        receivers.push(Receiver {
            wants: split.nonsensitive.clone(),
            has: split.known.union(&split.sensitive).copied().collect(),
        });
        Instance { field: self.field, n: self.n, receivers }
    }

    /// Side-by-side union: `other`'s messages are shifted past ours.
    pub fn disjoint_union(&self, other: &Instance) -> Result<Instance, InstanceError> {
        if self.field != other.field {
            return Err(InstanceError::Field(GfError::FieldMismatch(self.q(), other.q())));
        }
        let shift = |set: &MessageSet| set.iter().map(|&j| j + self.n).collect();
        let mut receivers = self.receivers.clone();
        receivers.extend(other.receivers.iter().map(|r| Receiver { wants: shift(&r.wants), has: shift(&r.has) }));
        Ok(Instance { field: self.field, n: self.n + other.n, receivers })
    }

    /// Renames message `j` to `perm[j]`.
    pub fn relabel(&self, perm: &[usize]) -> Instance {
        assert_eq!(perm.len(), self.n);
        let map = |set: &MessageSet| set.iter().map(|&j| perm[j]).collect();
        Instance {
            field: self.field,
            n: self.n,
            receivers: self.receivers.iter().map(|r| Receiver { wants: map(&r.wants), has: map(&r.has) }).collect(),
        }
    }
}

/// An induced subproblem with the map back to the parent's message labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubInstance {
    pub instance: Instance,
    /// `original[j]` is the parent index of sub-message `j`.
    pub original: Vec<usize>,
}

/// Partition of the messages into known (K), sensitive (S) and
/// non-sensitive (U) sets, as seen by the eavesdropper.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AdversarySplit {
    known: MessageSet,
    sensitive: MessageSet,
    nonsensitive: MessageSet,
}

impl AdversarySplit {
    pub fn new(n: usize, known: MessageSet, sensitive: MessageSet, nonsensitive: MessageSet) -> Result<Self, InstanceError> {
        let sets: [(&'static str, &MessageSet); 3] =
            [("knows", &known), ("sensitive", &sensitive), ("nonsensitive", &nonsensitive)];
        let mut owner: Vec<Option<&'static str>> = vec![None; n];
        for (name, set) in sets {
            for &j in set {
                if j >= n {
                    return Err(InstanceError::IndexOutOfRange { field: format!("adversary.{name}"), index: j + 1, n });
                }
                if let Some(first) = owner[j] {
                    return Err(InstanceError::SplitOverlap { index: j + 1, first, second: name });
                }
                owner[j] = Some(name);
            }
        }
        if let Some(j) = owner.iter().position(Option::is_none) {
            return Err(InstanceError::SplitIncomplete { index: j + 1 });
        }
        if sensitive.is_empty() {
            return Err(InstanceError::EmptySensitive);
        }
        Ok(AdversarySplit { known, sensitive, nonsensitive })
    }

    pub fn known(&self) -> &MessageSet {
        &self.known
    }

    pub fn sensitive(&self) -> &MessageSet {
        &self.sensitive
    }

    pub fn nonsensitive(&self) -> &MessageSet {
        &self.nonsensitive
    }

    pub fn k(&self) -> usize {
        self.known.len()
    }

    pub fn s(&self) -> usize {
        self.sensitive.len()
    }

    pub fn u(&self) -> usize {
        self.nonsensitive.len()
    }

    pub fn message_count(&self) -> usize {
        self.k() + self.s() + self.u()
    }

    /// S ∪ U.
    pub fn unknown(&self) -> MessageSet {
        self.sensitive.union(&self.nonsensitive).copied().collect()
    }

    /// Column order used by the leakage objective: S first, then U.
    pub fn sensitive_then_nonsensitive(&self) -> Vec<usize> {
        self.sensitive.iter().chain(&self.nonsensitive).copied().collect()
    }

    pub fn relabel(&self, perm: &[usize]) -> AdversarySplit {
        let map = |set: &MessageSet| set.iter().map(|&j| perm[j]).collect();
        AdversarySplit { known: map(&self.known), sensitive: map(&self.sensitive), nonsensitive: map(&self.nonsensitive) }
    }

    /// Moves message `j` from U to K.
    pub fn reveal(&self, j: usize) -> Option<AdversarySplit> {
        if !self.nonsensitive.contains(&j) {
            return None;
        }
        let mut out = self.clone();
        out.nonsensitive.remove(&j);
        out.known.insert(j);
        Some(out)
    }

    /// Split of a side-by-side union, with `other` shifted by `shift`.
    pub fn disjoint_union(&self, other: &AdversarySplit, shift: usize) -> AdversarySplit {
        let join = |a: &MessageSet, b: &MessageSet| a.iter().copied().chain(b.iter().map(|&j| j + shift)).collect();
        AdversarySplit {
            known: join(&self.known, &other.known),
            sensitive: join(&self.sensitive, &other.sensitive),
            nonsensitive: join(&self.nonsensitive, &other.nonsensitive),
        }
    }
}

/// JSON form of an instance, 1-based:
/// `{"q": 2, "n": 5, "receivers": [{"wants": [1], "has": [4,5]}, ...],
///   "adversary": {"knows": [5], "sensitive": [1,3], "nonsensitive": [2,4]}}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub q: u64,
    pub n: usize,
    pub receivers: Vec<ReceiverDocument>,
    pub adversary: AdversaryDocument,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReceiverDocument {
    pub wants: Vec<usize>,
    #[serde(default)]
    pub has: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdversaryDocument {
    #[serde(default)]
    pub knows: Vec<usize>,
    pub sensitive: Vec<usize>,
    #[serde(default)]
    pub nonsensitive: Vec<usize>,
}

fn to_zero_based(list: &[usize], field: impl Fn() -> String, n: usize) -> Result<MessageSet, InstanceError> {
    list.iter()
        .map(|&j| {
            if j == 0 || j > n {
                Err(InstanceError::IndexOutOfRange { field: field(), index: j, n })
            } else {
                Ok(j - 1)
            }
        })
        .collect()
}

fn to_one_based(set: &MessageSet) -> Vec<usize> {
    set.iter().map(|j| j + 1).collect()
}

impl InstanceDocument {
    pub fn from_json(text: &str) -> Result<Self, InstanceError> {
        serde_json::from_str(text).map_err(|e| InstanceError::Malformed(e.to_string()))
    }

    pub fn from_parts(inst: &Instance, split: &AdversarySplit) -> Self {
        InstanceDocument {
            q: inst.q() as u64,
            n: inst.message_count(),
            receivers: inst
                .receivers()
                .iter()
                .map(|r| ReceiverDocument { wants: to_one_based(&r.wants), has: to_one_based(&r.has) })
                .collect(),
            adversary: AdversaryDocument {
                knows: to_one_based(split.known()),
                sensitive: to_one_based(split.sensitive()),
                nonsensitive: to_one_based(split.nonsensitive()),
            },
        }
    }

    pub fn validate(&self) -> Result<(Instance, AdversarySplit), InstanceError> {
        let field = PrimeField::new(self.q)?;
        let n = self.n;
        let receivers = self
            .receivers
            .iter()
            .enumerate()
            .map(|(i, r)| {
                Ok(Receiver {
                    wants: to_zero_based(&r.wants, || format!("receivers[{i}].wants"), n)?,
                    has: to_zero_based(&r.has, || format!("receivers[{i}].has"), n)?,
                })
            })
            .collect::<Result<Vec<_>, InstanceError>>()?;
        let inst = Instance::new(field, n, receivers)?;
        let a = &self.adversary;
        let split = AdversarySplit::new(
            n,
            to_zero_based(&a.knows, || "adversary.knows".into(), n)?,
            to_zero_based(&a.sensitive, || "adversary.sensitive".into(), n)?,
            to_zero_based(&a.nonsensitive, || "adversary.nonsensitive".into(), n)?,
        )?;
        Ok((inst, split))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance documents always serialize")
    }
}

/// Parses and validates an instance document.
pub fn parse_instance(text: &str) -> Result<(Instance, AdversarySplit), InstanceError> {
    InstanceDocument::from_json(text)?.validate()
}
