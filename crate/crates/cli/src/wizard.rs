//! Interactive questionnaire that builds a [`Project`] one answer at a time.
//!
//! Order: the 15 inventory cells, the 14 GSCs, then the 7 NFRs. Tabled NFRs
//! show their six guideline rows before the prompt; the others offer the
//! rating suggested by their mapped GSCs as the default. Typing `abort` at
//! any prompt, or closing the input, cancels without producing a project.

use std::io::{self, BufRead, Write};

use fpnfr_core::rubric::{is_tabled, Guideline};
use fpnfr_core::{
    mapped_gscs, suggest_nfr_di, DegreeOfInfluence, FunctionCell, FunctionInventory, GscId,
    GscRatingSheet, NfrId, NfrRatingSheet, Project, RubricTable, DEFAULT_PROFILE,
};
use thiserror::Error;

pub const ABORT_WORD: &str = "abort";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WizardOptions {
    pub name: String,
    pub weight_profile: String,
    /// Re-prompts allowed after an invalid answer before giving up.
    pub max_retries: u32,
}

impl Default for WizardOptions {
    fn default() -> Self {
        WizardOptions {
            name: "untitled".to_owned(),
            weight_profile: DEFAULT_PROFILE.to_owned(),
            max_retries: 3,
        }
    }
}

#[derive(Debug, Error)]
pub enum WizardError {
    #[error("wizard aborted")]
    Aborted,
    #[error("too many invalid answers for {prompt}")]
    RetriesExhausted { prompt: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

struct Session<'a, R, W> {
    input: R,
    output: W,
    options: &'a WizardOptions,
}

impl<R: BufRead, W: Write> Session<'_, R, W> {
    /// Asks until `parse` accepts the answer. An empty answer takes
    /// `default` when there is one.
    fn ask<T>(&mut self, prompt: &str, default: Option<T>, parse: impl Fn(&str) -> Option<T>) -> Result<T, WizardError>
    where
        T: Copy + std::fmt::Display,
    {
        for _attempt in 0..=self.options.max_retries {
            match default {
                Some(d) => write!(self.output, "{prompt} [{d}]: ")?,
                None => write!(self.output, "{prompt}: ")?,
            }
            self.output.flush()?;
            let mut line = String::new();
            if self.input.read_line(&mut line)? == 0 {
                return Err(WizardError::Aborted);
            }
            let answer = line.trim();
            if answer.eq_ignore_ascii_case(ABORT_WORD) {
                return Err(WizardError::Aborted);
            }
            if answer.is_empty() {
                if let Some(d) = default {
                    return Ok(d);
                }
            } else if let Some(v) = parse(answer) {
                return Ok(v);
            }
            writeln!(self.output, "  invalid answer `{answer}`")?;
        }
        Err(WizardError::RetriesExhausted {
            prompt: prompt.to_owned(),
        })
    }

    fn ask_di(&mut self, prompt: &str, default: Option<u8>) -> Result<u8, WizardError> {
        self.ask(prompt, default, |s| {
            s.parse::<u8>().ok().filter(|&v| DegreeOfInfluence::new(v).is_ok())
        })
    }
}

pub fn run_wizard<R: BufRead, W: Write>(
    input: R,
    output: W,
    rubrics: &RubricTable,
    options: &WizardOptions,
) -> Result<Project, WizardError> {
    let mut s = Session {
        input,
        output,
        options,
    };
    writeln!(s.output, "Function inventory: number of functions per type and complexity.")?;
    let mut inventory = FunctionInventory::empty();
    for cell in FunctionCell::all() {
        let count = s.ask(&format!("count {cell}"), None, |a| a.parse::<u32>().ok())?;
        inventory.set(cell, count);
    }

    writeln!(s.output, "\nGeneral system characteristics: DI 0 (none) to 5 (strong).")?;
    let mut gsc = GscRatingSheet::empty();
    for &g in GscId::ALL {
        let di = s.ask_di(&format!("GSC {:>2} {g}", g.ordinal()), None)?;
        gsc.set(g, di);
    }

    writeln!(s.output, "\nNon-functional requirements: DI 0 (none) to 5 (strong).")?;
    let mut nfr = NfrRatingSheet::empty();
    for &n in NfrId::ALL {
        let mapped: Vec<&str> = mapped_gscs(n).iter().map(|g| g.name()).collect();
        writeln!(s.output, "\n{n} (maps to {})", mapped.join(", "))?;
        let default = if is_tabled(n) {
            if let Some(title) = rubrics.title(n) {
                writeln!(s.output, "{title}")?;
            }
            for level in DegreeOfInfluence::levels() {
                if let g @ Guideline::Text { .. } = rubrics.guideline(n, level) {
                    writeln!(s.output, "  {level}: {g}")?;
                }
            }
            None
        } else {
            let suggestion = suggest_nfr_di(n, &gsc);
            writeln!(s.output, "  no guideline table; suggested from mapped GSCs: {suggestion}")?;
            Some(suggestion.value())
        };
        let di = s.ask_di(&format!("NFR {n}"), default)?;
        nfr.set(n, di);
    }
    writeln!(s.output)?;

    Ok(Project {
        name: options.name.clone(),
        inventory,
        gsc,
        nfr,
        weight_profile: options.weight_profile.clone(),
        metadata: Default::default(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use fpnfr_core::validate_project;

    fn answers(lines: &[&str]) -> io::Cursor<Vec<u8>> {
        io::Cursor::new(lines.join("\n").into_bytes())
    }

    fn run(lines: &[&str]) -> (Result<Project, WizardError>, String) {
        let mut transcript = Vec::new();
        let result = run_wizard(
            answers(lines),
            &mut transcript,
            RubricTable::embedded(),
            &WizardOptions::default(),
        );
        (result, String::from_utf8(transcript).unwrap())
    }

    #[test]
    fn all_zero_answers() {
        let (result, _) = run(&["0"; 36]);
        let p = result.unwrap();
        assert_eq!(p, Project::zeroed("untitled", DEFAULT_PROFILE));
        assert_eq!(validate_project(&p), Ok(()));
    }

    #[test]
    fn security_prompt_shows_rubric() {
        let mut lines = vec!["0"; 36];
        lines[15 + 14 + 3] = "5"; // security is the fourth NFR
        let (result, transcript) = run(&lines);
        assert_eq!(result.unwrap().nfr.value(NfrId::Security), 5);
        let security = transcript.find("security (maps to").unwrap();
        assert!(transcript[security..].contains("different hardware and programming environments"));
        assert!(transcript[security..].contains("[text truncated in source]"));
    }

    #[test]
    fn untabled_nfrs_default_to_suggestion() {
        let mut lines = vec!["0"; 15];
        let mut gsc = vec!["0"; 14];
        gsc[11] = "4"; // operational_ease
        lines.extend(gsc);
        lines.push(""); // reliability: accept suggestion
        lines.extend(["0"; 6]);
        let (result, transcript) = run(&lines);
        assert_eq!(result.unwrap().nfr.value(NfrId::Reliability), 4);
        assert!(transcript.contains("NFR reliability [4]: "));
    }

    #[test]
    fn abort_and_eof() {
        let (result, _) = run(&["3", "abort"]);
        assert!(matches!(result, Err(WizardError::Aborted)));
        let (result, _) = run(&["0"; 20]);
        assert!(matches!(result, Err(WizardError::Aborted)));
    }

    #[test]
    fn invalid_answers_reprompt_then_give_up() {
        let mut lines = vec!["x", "-1", "7"];
        lines.extend(["0"; 35]);
        let (result, transcript) = run(&lines);
        assert!(result.is_ok());
        assert_eq!(transcript.matches("invalid answer").count(), 2);

        let mut lines = vec!["0"; 15];
        lines.extend(["6", "9", "x", "?"]);
        let (result, _) = run(&lines);
        assert!(matches!(result, Err(WizardError::RetriesExhausted { .. })));
    }
}
