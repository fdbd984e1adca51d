//! Line-oriented session. Input is buffered until the parentheses close, so
//! a form may span several lines.

use std::io::{self, BufRead, IsTerminal, Write};

use metta::{parse_atom, parse_program, Metta, ParseError, ProgramItem};

use crate::write_outputs;

pub struct Session<O, E> {
    metta: Metta,
    out: O,
    err: E,
    pending: String,
}

#[derive(Debug, PartialEq, Eq)]
pub enum Flow {
    Continue,
    Quit,
}

impl<O: Write, E: Write> Session<O, E> {
    pub fn new(metta: Metta, out: O, err: E) -> Self {
        Session {
            metta,
            out,
            err,
            pending: String::new(),
        }
    }

    pub fn run(&mut self, input: impl BufRead) -> io::Result<()> {
        let interactive = io::stdin().is_terminal();
        let mut lines = input.lines();
        loop {
            if interactive {
                let prompt = if self.pending.is_empty() {
                    "metta> "
                } else {
                    "   ... "
                };
                write!(self.out, "{prompt}")?;
                self.out.flush()?;
            }
            let Some(line) = lines.next() else { break };
            if self.feed(&line?)? == Flow::Quit {
                return Ok(());
            }
        }
        if !self.pending.trim().is_empty() {
            writeln!(self.err, "error: incomplete input at end of session")?;
        }
        Ok(())
    }

    pub fn feed(&mut self, line: &str) -> io::Result<Flow> {
        if self.pending.is_empty() {
            let trimmed = line.trim();
            if let Some(command) = trimmed.strip_prefix(':') {
                return self.command(command);
            }
        }
        self.pending.push_str(line);
        self.pending.push('\n');
        match parse_program(&self.pending) {
            Err(ParseError::Unclosed(_)) => return Ok(Flow::Continue),
            Err(e) => writeln!(self.err, "error: {e}")?,
            Ok(items) => {
                for ProgramItem { atom, .. } in items {
                    let output = self.metta.evaluate(&atom);
                    write_outputs(&mut self.out, std::slice::from_ref(&output))?;
                }
            }
        }
        self.pending.clear();
        self.out.flush()?;
        Ok(Flow::Continue)
    }

    fn command(&mut self, command: &str) -> io::Result<Flow> {
        let (name, arg) = command
            .split_once(char::is_whitespace)
            .unwrap_or((command, ""));
        let arg = arg.trim();
        match name {
            "quit" | "q" => return Ok(Flow::Quit),
            "add" => match parse_atom(arg) {
                Ok(atom) => self.metta.space_mut().add(atom),
                Err(e) => writeln!(self.err, "error: {e}")?,
            },
            "load" => match std::fs::read_to_string(arg) {
                Ok(src) => match self.metta.run(&src) {
                    Ok(outputs) => write_outputs(&mut self.out, &outputs)?,
                    Err(e) => writeln!(self.err, "error: {arg}: {e}")?,
                },
                Err(e) => writeln!(self.err, "error: cannot read {arg}: {e}")?,
            },
            "space" => write!(self.out, "{}", self.metta.space().dump())?,
            _ => writeln!(self.err, "error: unknown command :{name}")?,
        }
        self.out.flush()?;
        Ok(Flow::Continue)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn session() -> Session<Vec<u8>, Vec<u8>> {
        Session::new(Metta::default(), Vec::new(), Vec::new())
    }

    fn feed_all(s: &mut Session<Vec<u8>, Vec<u8>>, lines: &[&str]) -> (String, String) {
        for line in lines {
            s.feed(line).unwrap();
        }
        (
            String::from_utf8(s.out.clone()).unwrap(),
            String::from_utf8(s.err.clone()).unwrap(),
        )
    }

    #[test]
    fn bare_and_banged_forms_are_directives() {
        let mut s = session();
        let (out, _) = feed_all(&mut s, &["(+ 2 3)", "!(* 2 3)"]);
        assert_eq!(out, "[5]\n[6]\n");
    }

    #[test]
    fn equalities_typed_in_are_evaluated_not_stored() {
        let mut s = session();
        feed_all(&mut s, &["(= (f) 1)"]);
        assert!(s.metta.space().is_empty());
    }

    #[test]
    fn add_then_match() {
        let mut s = session();
        let (out, err) = feed_all(
            &mut s,
            &[":add (Sam is a frog)", "(match &self ($x is a frog) $x)"],
        );
        assert_eq!(out, "[Sam]\n");
        assert!(err.is_empty());
    }

    #[test]
    fn forms_may_span_lines() {
        let mut s = session();
        let (out, _) = feed_all(&mut s, &["(+ 1", "   (* 2 3))"]);
        assert_eq!(out, "[7]\n");
    }

    #[test]
    fn parse_errors_do_not_end_the_session() {
        let mut s = session();
        let (out, err) = feed_all(&mut s, &[")", "(+ 1 1)"]);
        assert_eq!(out, "[2]\n");
        assert!(err.starts_with("error:"));
    }

    #[test]
    fn space_dump_and_quit() {
        let mut s = session();
        let (out, _) = feed_all(&mut s, &[":add (a \"b c\" 1.5)", ":space"]);
        assert_eq!(out, "(a \"b c\" 1.5)\n");
        assert_eq!(s.feed(":quit").unwrap(), Flow::Quit);
    }

    #[test]
    fn unknown_command_is_reported() {
        let mut s = session();
        let (_, err) = feed_all(&mut s, &[":frobnicate"]);
        assert!(err.contains(":frobnicate"));
    }
}
