//! Plain-text sequence files.
//!
//! ```text
//! # n=3 r=2
//! 0,1
//! 1,1
//! ```
//!
//! One vector per line as comma-separated residues. Lines starting with `#`
//! are comments; the first `#` line carrying `n=` and `r=` is the header and
//! is mandatory. The header may also carry `k=` (default 1).

use crate::error::{Error, Result};
use crate::types::{GSequence, GroupParams, ZVector};

fn parse_header(line: &str, lineno: usize) -> Result<Option<GroupParams>> {
    let body = line.trim_start_matches('#');
    let (mut n, mut r, mut k) = (None, None, None);
    for tok in body.split_whitespace() {
        let Some((key, val)) = tok.split_once('=') else {
            continue;
        };
        let bad = || Error::Parse {
            line: lineno,
            msg: format!("bad header value {tok:?}"),
        };
        match key {
            "n" => n = Some(val.parse::<u32>().map_err(|_| bad())?),
            "r" => r = Some(val.parse::<usize>().map_err(|_| bad())?),
            "k" => k = Some(val.parse::<u32>().map_err(|_| bad())?),
            _ => {}
        }
    }
    match (n, r) {
        (Some(n), Some(r)) => GroupParams::new(n, r, k.unwrap_or(1))
            .map(Some)
            .map_err(|e| Error::Parse {
                line: lineno,
                msg: e.to_string(),
            }),
        _ => Ok(None),
    }
}

pub fn parse_sequence(text: &str) -> Result<GSequence> {
    let mut params: Option<GroupParams> = None;
    let mut items = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('#') {
            if params.is_none() {
                params = parse_header(line, lineno)?;
            }
            continue;
        }
        let Some(p) = params else {
            return Err(Error::Parse {
                line: lineno,
                msg: "vector before the '# n=<n> r=<r>' header".into(),
            });
        };
        let coords = line
            .split(',')
            .map(|t| t.trim().parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Parse {
                line: lineno,
                msg: format!("{e}: {line:?}"),
            })?;
        let v = ZVector::new(&p, coords).map_err(|e| Error::Parse {
            line: lineno,
            msg: e.to_string(),
        })?;
        items.push(v);
    }
    let params = params.ok_or_else(|| Error::Parse {
        line: 0,
        msg: "missing '# n=<n> r=<r>' header".into(),
    })?;
    GSequence::new(params, items)
}

pub fn format_sequence(seq: &GSequence) -> String {
    let p = seq.params();
    let mut out = format!("# n={} r={}\n", p.n(), p.r());
    for v in seq.items() {
        let row: Vec<String> = v.coords().iter().map(u32::to_string).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_with_comments() {
        let s = parse_sequence("# some note\n# n=3 r=2\n0,1\n\n# mid\n2, 2\n").unwrap();
        assert_eq!(s.params().n(), 3);
        assert_eq!(s.len(), 2);
        assert_eq!(s.items()[1].coords(), &[2, 2]);
    }

    #[test]
    fn header_k() {
        let s = parse_sequence("# n=2 r=1 k=3\n1\n").unwrap();
        assert_eq!(s.params().k(), 3);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_sequence("0,1\n").is_err());
        assert!(parse_sequence("").is_err());
        assert!(parse_sequence("# n=3 r=2\n0,3\n").is_err());
        assert!(parse_sequence("# n=3 r=2\n0\n").is_err());
        assert!(parse_sequence("# n=3 r=2\n0,x\n").is_err());
        assert!(parse_sequence("# n=0 r=2\n").is_err());
    }

    proptest! {
        #[test]
        fn round_trip(n in 1u32..7, r in 1usize..4, raw in prop::collection::vec(prop::collection::vec(0u32..1000, 3), 0..12)) {
            let g = GroupParams::new(n, r, 1).unwrap();
            let rows: Vec<Vec<u32>> = raw.iter().map(|v| v[..r].iter().map(|c| c % n).collect()).collect();
            let seq = GSequence::from_rows(g, &rows).unwrap();
            let text = format_sequence(&seq);
            let back = parse_sequence(&text).unwrap();
            prop_assert_eq!(back.items(), seq.items());
        }
    }
}
