//! Parsing of quantum-number assignments from `name=2j[,2m]` text, shared by
//! the command-line front end and the C bindings.

use thiserror::Error;

use crate::graph::{AssignError, QuantumAssignment, RecouplingGraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AssignTextError {
    #[error("bad assignment `{0}`: expected name=2j or name=2j,2m")]
    Malformed(String),
    #[error("--m takes one doubled magnetic number per leg ({expected} legs, got {got})")]
    MagneticArity { expected: usize, got: usize },
    #[error(transparent)]
    Assign(#[from] AssignError),
}

/// Parses `name=2j[,2m]` tokens plus an optional positional magnetic list
/// (one doubled value per leg, in graph leg order). Line names match
/// case-insensitively.
pub fn parse_assignment(
    g: &RecouplingGraph,
    tokens: &[String],
    magnetic: Option<&[i32]>,
) -> Result<QuantumAssignment, AssignTextError> {
    let canonical = |raw: &str| -> String {
        g.edges()
            .iter()
            .map(|e| e.name.as_str())
            .chain(g.legs().iter().map(|l| l.name.as_str()))
            .find(|n| n.eq_ignore_ascii_case(raw))
            .map(str::to_string)
            .unwrap_or_else(|| raw.to_string())
    };

    let mut entries: Vec<(String, i32, Option<i32>)> = Vec::new();
    for tok in tokens {
        let (name, rest) = tok
            .split_once('=')
            .ok_or_else(|| AssignTextError::Malformed(tok.clone()))?;
        let name = canonical(name.trim());
        let (tj, tm) = match rest.split_once(',') {
            Some((j, m)) => (
                j.trim()
                    .parse::<i32>()
                    .map_err(|_| AssignTextError::Malformed(tok.clone()))?,
                Some(
                    m.trim()
                        .parse::<i32>()
                        .map_err(|_| AssignTextError::Malformed(tok.clone()))?,
                ),
            ),
            None => (
                rest.trim()
                    .parse::<i32>()
                    .map_err(|_| AssignTextError::Malformed(tok.clone()))?,
                None,
            ),
        };
        entries.push((name, tj, tm));
    }

    if let Some(tms) = magnetic {
        if tms.len() != g.leg_count() {
            return Err(AssignTextError::MagneticArity {
                expected: g.leg_count(),
                got: tms.len(),
            });
        }
        for (l, &tm) in tms.iter().enumerate() {
            let name = g.legs()[l].name.clone();
            if let Some(entry) = entries.iter_mut().find(|(n, _, _)| *n == name) {
                if entry.2.is_none() {
                    entry.2 = Some(tm);
                }
            }
        }
    }

    Ok(QuantumAssignment::new(g, &entries)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{six_j, three_j};

    #[test]
    fn inline_magnetic_numbers() {
        let g = three_j();
        let toks: Vec<String> = ["A=2,0", "B=2,0", "C=0,0"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let q = parse_assignment(&g, &toks, None).unwrap();
        assert_eq!(q.leg_tj, vec![2, 2, 0]);
        assert_eq!(q.leg_tm, vec![0, 0, 0]);
    }

    #[test]
    fn positional_magnetic_list_and_case_folding() {
        let g = three_j();
        let toks: Vec<String> = ["a=2", "b=2", "c=0"].iter().map(|s| s.to_string()).collect();
        let q = parse_assignment(&g, &toks, Some(&[0, 0, 0])).unwrap();
        assert_eq!(q.leg_tj, vec![2, 2, 0]);
        let err = parse_assignment(&g, &toks, Some(&[0, 0])).unwrap_err();
        assert!(matches!(err, AssignTextError::MagneticArity { .. }));
    }

    #[test]
    fn edges_take_no_magnetic_number() {
        let g = six_j();
        let toks: Vec<String> = ["A=2", "B=2", "C=2", "D=2", "E=2", "F=2"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let q = parse_assignment(&g, &toks, None).unwrap();
        assert_eq!(q.edge_tj, vec![2; 6]);
        let bad: Vec<String> = ["A=2,0", "B=2", "C=2", "D=2", "E=2", "F=2"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert!(parse_assignment(&g, &bad, None).is_err());
    }

    #[test]
    fn malformed_tokens_rejected() {
        let g = three_j();
        for bad in ["A", "A=x", "A=2,y", "=2"] {
            let toks = vec![bad.to_string()];
            assert!(matches!(
                parse_assignment(&g, &toks, None),
                Err(AssignTextError::Malformed(_)) | Err(AssignTextError::Assign(_))
            ));
        }
    }
}
