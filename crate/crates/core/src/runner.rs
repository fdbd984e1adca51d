//! A long-lived program session: one space, one operation registry.

use crate::atom::Atom;
use crate::interpreter::{run_program_with, DirectiveOutput, EvalConfig, Interpreter};
use crate::reader::{parse_program, ParseError, ProgramItem};
use crate::space::AtomSpace;
use crate::stdlib::StdEnv;

pub struct Metta {
    space: AtomSpace,
    env: StdEnv,
    config: EvalConfig,
}

impl Default for Metta {
    fn default() -> Self {
        Self::new(EvalConfig::default())
    }
}

impl Metta {
    pub fn new(config: EvalConfig) -> Self {
        Self::with_env(StdEnv::new(), config)
    }

    pub fn with_env(env: StdEnv, config: EvalConfig) -> Self {
        Metta {
            space: AtomSpace::new(),
            env,
            config,
        }
    }

    pub fn space(&self) -> &AtomSpace {
        &self.space
    }

    pub fn space_mut(&mut self) -> &mut AtomSpace {
        &mut self.space
    }

    pub fn config(&self) -> &EvalConfig {
        &self.config
    }

    /// Parses all of `src` first; nothing runs if it does not parse.
    pub fn run(&mut self, src: &str) -> Result<Vec<DirectiveOutput>, ParseError> {
        let items = parse_program(src)?;
        Ok(self.run_items(&items))
    }

    pub fn run_items(&mut self, items: &[ProgramItem]) -> Vec<DirectiveOutput> {
        run_program_with(&mut self.space, &self.env, items, &self.config)
    }

    /// Evaluates `atom` as a directive.
    pub fn evaluate(&mut self, atom: &Atom) -> DirectiveOutput {
        Interpreter::new(&mut self.space, &self.env, self.config).run_directive(atom)
    }
}
