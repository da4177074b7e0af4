//! Plain-text ID lists.
//!
//! `#` starts a comment. A line holding several words is one ID; otherwise
//! consecutive one-word lines form an ID, ended by a blank line.

use thiserror::Error;

use crate::id_engine::{verify_id, IdError, IdentityProduct};
use crate::pauli_core::{PauliError, PauliObservable};

#[derive(Debug, Error)]
pub enum TextError {
    #[error("line {line}: {source}")]
    Word { line: usize, source: PauliError },
    #[error("ID ending at line {line}: {source}")]
    Id { line: usize, source: IdError },
    #[error("no IDs found")]
    Empty,
}

pub fn parse_id_blocks(text: &str) -> Result<Vec<IdentityProduct>, TextError> {
    let mut out = vec![];
    let mut block: Vec<PauliObservable> = vec![];
    let flush = |block: &mut Vec<PauliObservable>, out: &mut Vec<IdentityProduct>, line| {
        if !block.is_empty() {
            out.push(verify_id(block).map_err(|source| TextError::Id { line, source })?);
            block.clear();
        }
        Ok::<(), TextError>(())
    };
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        let words: Vec<PauliObservable> = body
            .split(|c: char| c.is_whitespace() || c == ',' || c == ';')
            .filter(|w| !w.is_empty())
            .map(|w| w.parse().map_err(|source| TextError::Word { line, source }))
            .collect::<Result<_, _>>()?;
        match words.len() {
            0 => flush(&mut block, &mut out, line)?,
            1 => block.extend(words),
            _ => {
                flush(&mut block, &mut out, line)?;
                block = words;
                flush(&mut block, &mut out, line)?;
            }
        }
    }
    flush(&mut block, &mut out, text.lines().count())?;
    if out.is_empty() {
        return Err(TextError::Empty);
    }
    Ok(out)
}

/// One row per line, IDs separated by blank lines.
pub fn format_id_blocks(ids: &[IdentityProduct]) -> String {
    ids.iter().map(|id| id.rows().iter().map(|r| format!("{r}\n")).collect::<String>()).collect::<Vec<_>>().join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{named, NAMES};

    #[test]
    fn both_layouts() {
        let a = parse_id_blocks("# square\nZI IZ ZZ\nXI\nIX\nXX\n\nZZ XX YY  # neg\n").unwrap();
        assert_eq!(a.len(), 3);
        assert_eq!(a[1].rows().len(), 3);
        assert!(a[2].is_negative());
        assert!(matches!(parse_id_blocks("# nothing\n"), Err(TextError::Empty)));
        assert!(matches!(parse_id_blocks("ZZ\nXX\n"), Err(TextError::Id { line: 2, .. })));
        assert!(matches!(parse_id_blocks("ZQ XX"), Err(TextError::Word { line: 1, .. })));
    }

    #[test]
    fn catalog_round_trips() {
        for info in NAMES.iter().filter(|i| !matches!(i.name, "alt_star_5" | "arch_6" | "arrow_6")) {
            let ids = named(info.name).unwrap().ids();
            assert_eq!(parse_id_blocks(&format_id_blocks(&ids)).unwrap(), ids, "{}", info.name);
        }
    }
}
