//! Plain-text ideal files:
//!
//! ```text
//! # twisted cubic
//! nvars = 4
//! x0*x2 - x1^2
//! x1*x3 - x2^2
//! x0*x3 - x1*x2
//! ```

use super::{Ideal, IdealError};
use crate::polyalgebra::{parse_poly, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IdealFileError {
    #[error("missing 'nvars = <k>' header")]
    MissingHeader,
    #[error("line {line}: malformed header, expected 'nvars = <k>'")]
    BadHeader { line: usize },
    #[error("line {line}: {source}")]
    Poly { line: usize, source: ParseError },
    #[error(transparent)]
    Ideal(#[from] IdealError),
}

/// Reads an ideal definition. Blank lines and `#` comments are ignored.
pub fn parse_ideal_file(text: &str) -> Result<Ideal, IdealFileError> {
    let mut nvars: Option<usize> = None;
    let mut gens = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        match nvars {
            None => {
                let (key, value) = line.split_once('=').ok_or(IdealFileError::BadHeader { line: i + 1 })?;
                if key.trim() != "nvars" {
                    return Err(IdealFileError::MissingHeader);
                }
                let k: usize = value.trim().parse().map_err(|_| IdealFileError::BadHeader { line: i + 1 })?;
                nvars = Some(k);
            }
            Some(k) => {
                let p = parse_poly(line, k).map_err(|source| IdealFileError::Poly { line: i + 1, source })?;
                gens.push(p);
            }
        }
    }
    let k = nvars.ok_or(IdealFileError::MissingHeader)?;
    Ok(Ideal::new(k, gens)?)
}

impl Ideal {
    /// Text in the format read by [`parse_ideal_file`].
    pub fn to_file_string(&self) -> String {
        let mut s = format!("nvars = {}\n", self.nvars());
        for g in self.generators() {
            s.push_str(&g.to_string());
            s.push('\n');
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_comments_and_generators() {
        let text = "# twisted cubic\nnvars = 4\n\nx0*x2 - x1^2  # first\nx1*x3 - x2^2\nx0*x3 - x1*x2\n";
        let i = parse_ideal_file(text).unwrap();
        assert_eq!(i.nvars(), 4);
        assert_eq!(i.generators().len(), 3);
        assert_eq!(parse_ideal_file(&i.to_file_string()).unwrap(), i);
    }

    #[test]
    fn errors() {
        assert_eq!(parse_ideal_file("x0\n"), Err(IdealFileError::BadHeader { line: 1 }));
        assert_eq!(parse_ideal_file("# nothing\n"), Err(IdealFileError::MissingHeader));
        assert_eq!(parse_ideal_file("nvars = two\n"), Err(IdealFileError::BadHeader { line: 1 }));
        assert!(matches!(parse_ideal_file("nvars = 2\nx0 +\n"), Err(IdealFileError::Poly { line: 2, .. })));
        assert!(matches!(parse_ideal_file("nvars = 2\nx0 + x1^2\n"), Err(IdealFileError::Ideal(_))));
    }
}
