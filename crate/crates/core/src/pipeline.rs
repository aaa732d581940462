//! End-to-end compilation: parsed inputs plus a plan in, scenes and a VFG
//! document out.

use thiserror::Error;

use crate::pddl::{
    parse_domain, parse_plan, parse_problem, DomainAst, PddlError, PlanParseError, PlanText, ProblemAst,
};
use crate::plan::{execute_plan, goal_report, ExecError, SubgoalTable, Trajectory};
use crate::profile::{check_profile, parse_profile, AnimationProfile, Diagnostic, ProfileError};
use crate::render::{self, GifError, RenderSettings};
use crate::scene::{SceneBuilder, SceneSequence, SequenceError};
use crate::vfg::{build_document, serialize_vfg, Metadata, VfgDocument, GENERATOR};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("domain: {0}")]
    Domain(PddlError),
    #[error("problem: {0}")]
    Problem(PddlError),
    #[error("animation profile: {0}")]
    Profile(#[from] ProfileError),
    #[error("animation profile has {} error(s): {}", .0.len(), .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    ProfileCheck(Vec<Diagnostic>),
    #[error("plan: {0}")]
    Plan(#[from] PlanParseError),
    #[error("invalid plan: {0}")]
    Exec(#[from] ExecError),
    #[error("scene synthesis failed in {0}")]
    Scene(#[from] SequenceError),
    #[error("GIF export: {0}")]
    Gif(#[from] GifError),
}

/// Parsed domain, problem and animation profile.
#[derive(Debug, Clone)]
pub struct Inputs {
    pub domain: DomainAst,
    pub problem: ProblemAst,
    pub profile: AnimationProfile,
}

#[derive(Debug, Clone)]
pub struct Compiled {
    pub trajectory: Trajectory,
    pub report: SubgoalTable,
    pub sequence: SceneSequence,
    pub document: VfgDocument,
}

impl Compiled {
    pub fn vfg_bytes(&self) -> Vec<u8> {
        serialize_vfg(&self.document)
    }

    pub fn svg_frames(&self, settings: &RenderSettings) -> Vec<Vec<u8>> {
        render::export_svg_frames(&self.sequence, settings)
    }

    pub fn gif(&self, settings: &RenderSettings) -> Result<Vec<u8>, PipelineError> {
        Ok(render::render_gif(&self.sequence, settings)?)
    }
}

impl Inputs {
    pub fn parse(domain: &str, problem: &str, profile: &str) -> Result<Self, PipelineError> {
        let domain = parse_domain(domain).map_err(PipelineError::Domain)?;
        let problem = parse_problem(problem, &domain).map_err(PipelineError::Problem)?;
        let profile = parse_profile(profile)?;
        Ok(Inputs {
            domain,
            problem,
            profile,
        })
    }

    pub fn parse_plan(&self, plan: &str) -> Result<PlanText, PipelineError> {
        Ok(parse_plan(plan, &self.domain)?)
    }

    pub fn check(&self) -> Vec<Diagnostic> {
        check_profile(&self.profile, &self.domain, &self.problem)
    }

    /// Runs the plan and synthesizes every scene. Fails on profile errors,
    /// an inapplicable step, or a scene that cannot be resolved.
    pub fn compile(&self, plan: &PlanText, seed: u64) -> Result<Compiled, PipelineError> {
        let errors: Vec<Diagnostic> = self.check().into_iter().filter(Diagnostic::is_error).collect();
        if !errors.is_empty() {
            return Err(PipelineError::ProfileCheck(errors));
        }
        let trajectory = execute_plan(&self.domain, &self.problem, plan)?;
        let report = goal_report(&trajectory, &self.problem.goal);
        let sequence =
            SceneBuilder::new(&self.domain, &self.problem, &self.profile, seed).synthesize_sequence(&trajectory)?;
        let metadata = Metadata {
            domain_name: self.domain.name.clone(),
            problem_name: self.problem.name.clone(),
            generator: GENERATOR.to_string(),
            seed,
        };
        let document = build_document(&sequence, &trajectory, &report, metadata);
        Ok(Compiled {
            trajectory,
            report,
            sequence,
            document,
        })
    }
}
