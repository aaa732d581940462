//! Plan animation compiler.
//!
//! Takes a PDDL domain, problem and plan together with a declarative
//! animation profile, and produces a deterministic sequence of 2D scenes with
//! transitions between them. Scenes can be serialized as a VFG document,
//! exported as SVG frames, or encoded as an animated GIF.

pub mod cli;
pub mod color;
pub mod layout;
pub mod pddl;
pub mod pipeline;
pub mod plan;
pub mod profile;
pub mod render;
pub mod scene;
pub mod service;
pub mod sexpr;
pub mod vfg;
