//! Exact analysis of information leakage in index coding.
//!
//! A server broadcasts a coded function of `n` messages over GF(q) to
//! receivers that each want some messages and already hold others. An
//! eavesdropper knows the messages in `K` and tries to guess the sensitive
//! messages `S`; the remaining messages `U` are not sensitive and can act
//! as key material.
//!
//! The crate computes:
//! - the minimum leakage of scalar linear codes, by searching fitting
//!   matrices for the smallest `rank([S U]) - rank(U)` ([`fitting`]);
//! - a converse bound for every code, from the independence number of the
//!   confusion graph of an extended problem ([`leakage::theorem2_lower_bound`]);
//! - broadcast rates: exact via confusion graphs, the MAIS lower bound and
//!   the minrank upper bound ([`rate`]);
//! - brute-force leakage of any explicit encoder, used as the oracle the
//!   closed forms are checked against ([`leakage::oracle_leakage`]).

pub mod fitting;
pub mod gf;
pub mod graph;
pub mod instance;
pub mod leakage;
pub mod rate;
pub mod rational;
pub mod space;
pub mod testgen;

pub use gf::{GfError, MatrixGF, PrimeField};
pub use graph::{ConfusionGraph, GraphError, IndependentSet};
pub use instance::{parse_instance, AdversarySplit, Instance, InstanceDocument, InstanceError, MessageSet, Receiver};
pub use rational::Rational;
