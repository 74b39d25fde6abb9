//! Code knowledge graph engine.
//!
//! Turns a Python repository into a typed property graph, retrieves
//! query-relevant subgraphs through combined lexical, semantic and graph
//! search, and grounds LLM code generation in the retrieved context.

pub mod descriptions;
pub mod eval;
pub mod generation;
pub mod graph;
pub mod index;
pub mod parser;
pub mod pipeline;
pub mod retrieval;
