//! Text formats: a spec is one cycle length per line, an embedding one cycle
//! per line as space-separated vertex ids. Blank lines and `#` comments are
//! skipped.

use std::io::{BufRead, Write};

use super::{CycleFamilySpec, EmbedError, Embedding};

fn content_lines<R: BufRead>(reader: R) -> impl Iterator<Item = Result<(usize, String), EmbedError>> {
    reader.lines().enumerate().filter_map(|(i, line)| match line {
        Err(e) => Some(Err(e.into())),
        Ok(l) => {
            let t = l.split('#').next().unwrap_or("").trim().to_string();
            (!t.is_empty()).then_some(Ok((i + 1, t)))
        }
    })
}

fn parse_id(line: usize, tok: &str) -> Result<usize, EmbedError> {
    tok.parse().map_err(|_| EmbedError::Parse {
        line,
        message: format!("expected a non-negative integer, found {tok:?}"),
    })
}

impl CycleFamilySpec {
    pub fn read<R: BufRead>(reader: R) -> Result<Self, EmbedError> {
        let mut lengths = Vec::new();
        for item in content_lines(reader) {
            let (line, text) = item?;
            let mut toks = text.split_whitespace();
            let l = parse_id(line, toks.next().expect("non-empty line"))?;
            if toks.next().is_some() {
                return Err(EmbedError::Parse {
                    line,
                    message: "expected one length per line".into(),
                });
            }
            if l < 3 {
                return Err(EmbedError::Parse {
                    line,
                    message: format!("cycle length {l} is below 3"),
                });
            }
            lengths.push(l);
        }
        Ok(CycleFamilySpec { lengths })
    }

    pub fn write<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for l in &self.lengths {
            writeln!(w, "{l}")?;
        }
        Ok(())
    }
}

impl Embedding {
    pub fn read<R: BufRead>(reader: R) -> Result<Self, EmbedError> {
        let mut cycles = Vec::new();
        for item in content_lines(reader) {
            let (line, text) = item?;
            cycles.push(text.split_whitespace().map(|t| parse_id(line, t)).collect::<Result<Vec<_>, _>>()?);
        }
        Ok(Embedding { cycles })
    }

    pub fn write<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for c in &self.cycles {
            let line: Vec<String> = c.iter().map(usize::to_string).collect();
            writeln!(w, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_round_trip_and_comments() {
        let s = CycleFamilySpec::read("# family\n4\n\n5  \n200\n".as_bytes()).unwrap();
        assert_eq!(s.lengths(), &[4, 5, 200]);
        let mut buf = Vec::new();
        s.write(&mut buf).unwrap();
        assert_eq!(CycleFamilySpec::read(buf.as_slice()).unwrap(), s);
    }

    #[test]
    fn spec_errors_carry_line_numbers() {
        assert!(matches!(CycleFamilySpec::read("4\nx\n".as_bytes()), Err(EmbedError::Parse { line: 2, .. })));
        assert!(matches!(CycleFamilySpec::read("4\n2\n".as_bytes()), Err(EmbedError::Parse { line: 2, .. })));
        assert!(matches!(CycleFamilySpec::read("4 4\n".as_bytes()), Err(EmbedError::Parse { line: 1, .. })));
    }

    #[test]
    fn embedding_round_trip() {
        let e = Embedding {
            cycles: vec![vec![3, 1, 2], vec![0, 4, 5, 6]],
        };
        let mut buf = Vec::new();
        e.write(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "3 1 2\n0 4 5 6\n");
        assert_eq!(Embedding::read(buf.as_slice()).unwrap(), e);
    }
}
