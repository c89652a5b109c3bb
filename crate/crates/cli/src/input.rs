//! Inputs are file paths or inline text.

use std::fs;
use std::path::Path;

use csp_effects::terms::{infer_alphabet, parse_file, parse_process, Alphabet, ProcTerm};

/// Used for inline terms that mention no action at all.
const FALLBACK_ACTION: &str = "a";

pub fn read_arg(arg: &str) -> Result<(String, bool), String> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = fs::read_to_string(path).map_err(|e| format!("{arg}: {e}"))?;
        Ok((text, true))
    } else {
        Ok((arg.to_string(), false))
    }
}

pub fn parse_alphabet_flag(flag: &str) -> Result<Alphabet, String> {
    let names: Vec<&str> = flag.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    Alphabet::new(&names).map_err(|e| format!("--alphabet: {e}"))
}

/// Parses one or more process inputs over a common alphabet: the header of
/// any file among them, else `--alphabet`, else the actions the inline
/// texts mention.
pub fn load_processes(args: &[&str], flag: Option<&str>) -> Result<(Alphabet, Vec<ProcTerm>), String> {
    let texts = args.iter().map(|a| read_arg(a)).collect::<Result<Vec<_>, _>>()?;
    let mut alphabet: Option<Alphabet> = None;
    let mut parsed: Vec<Option<ProcTerm>> = Vec::new();
    for ((text, is_file), arg) in texts.iter().zip(args) {
        if *is_file {
            let (ab, t) = parse_file(text).map_err(|e| format!("{arg}: {e}"))?;
            match &alphabet {
                Some(prev) if *prev != ab => {
                    return Err(format!("{arg}: alphabet differs from the other input"))
                }
                _ => alphabet = Some(ab),
            }
            parsed.push(Some(t));
        } else {
            parsed.push(None);
        }
    }
    let alphabet = match (alphabet, flag) {
        (Some(ab), _) => ab,
        (None, Some(f)) => parse_alphabet_flag(f)?,
        (None, None) => {
            let mut names: Vec<String> = Vec::new();
            for (text, _) in &texts {
                for n in infer_alphabet(text).map_err(|e| e.to_string())? {
                    if !names.contains(&n) {
                        names.push(n);
                    }
                }
            }
            if names.is_empty() {
                names.push(FALLBACK_ACTION.into());
            }
            Alphabet::new(&names).map_err(|e| e.to_string())?
        }
    };
    let mut out = Vec::with_capacity(args.len());
    for ((p, (text, _)), arg) in parsed.into_iter().zip(&texts).zip(args) {
        match p {
            Some(t) => out.push(t),
            None => out.push(parse_process(text, &alphabet).map_err(|e| format!("`{arg}`: {e}"))?),
        }
    }
    Ok((alphabet, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inline_alphabet_is_inferred_across_inputs() {
        let (ab, ts) = load_processes(&["a -> STOP", "b -> STOP"], None).unwrap();
        assert_eq!(ab.names(), ["a", "b"]);
        assert_eq!(ts.len(), 2);
    }

    #[test]
    fn flag_overrides_inference() {
        let (ab, _) = load_processes(&["STOP"], Some("x, y")).unwrap();
        assert_eq!(ab.names(), ["x", "y"]);
    }

    #[test]
    fn no_actions_falls_back() {
        let (ab, _) = load_processes(&["STOP [] OMEGA"], None).unwrap();
        assert_eq!(ab.names(), [FALLBACK_ACTION]);
    }
}
