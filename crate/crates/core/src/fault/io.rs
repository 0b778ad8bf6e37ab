//! Text format for fault families:
//!
//! ```text
//! n=4 mode=structure:1
//! *010
//! *100
//! ```
//!
//! Blank lines and lines starting with `#` are ignored.

use std::fs;
use std::path::Path;

use super::{FaultFamily, FaultMode};
use crate::cube::Subcube;
use crate::error::{Error, Result};

pub fn render_family_file(f: &FaultFamily) -> String {
    let mut out = format!("n={} mode={}\n", f.ambient(), f.mode());
    for e in f.elements() {
        out.push_str(&e.to_string());
        out.push('\n');
    }
    out
}

pub fn parse_family_file(text: &str) -> Result<FaultFamily> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty fault file".into()))?;
    let (mut n, mut mode) = (None, None);
    for field in header.split_whitespace() {
        match field.split_once('=') {
            Some(("n", v)) => {
                n = Some(v.parse::<u8>().map_err(|_| Error::Parse(format!("bad dimension `{v}`")))?)
            }
            Some(("mode", v)) => mode = Some(v.parse::<FaultMode>()?),
            _ => return Err(Error::Parse(format!("unexpected header field `{field}`"))),
        }
    }
    let (Some(n), Some(mode)) = (n, mode) else {
        return Err(Error::Parse(format!("header `{header}` needs n=<n> and mode=<mode>")));
    };
    let elements = lines
        .map(|l| {
            let s: Subcube = l.parse()?;
            if s.ambient() != n {
                return Err(Error::Parse(format!("pattern `{l}` has length {} but n={n}", s.ambient())));
            }
            Ok(s)
        })
        .collect::<Result<Vec<_>>>()?;
    FaultFamily::try_new(n, mode, elements)
}

pub fn write_family_file(f: &FaultFamily, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, render_family_file(f))?;
    Ok(())
}

pub fn read_family_file(path: impl AsRef<Path>) -> Result<FaultFamily> {
    parse_family_file(&fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fault::adversarial_subcube_family;

    #[test]
    fn file_round_trip() {
        let f = adversarial_subcube_family(6, 2).unwrap();
        let text = render_family_file(&f);
        assert!(text.starts_with("n=6 mode=structure:2\n"));
        assert_eq!(parse_family_file(&text).unwrap(), f);

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.txt");
        write_family_file(&f, &path).unwrap();
        assert_eq!(read_family_file(&path).unwrap(), f);
    }

    #[test]
    fn rejects_bad_files() {
        assert!(parse_family_file("").is_err());
        assert!(parse_family_file("n=3\n0*1\n").is_err());
        assert!(parse_family_file("n=3 mode=structure:1\n0*10\n").is_err());
        assert!(parse_family_file("n=3 mode=structure:1\n0**\n").is_err());
        let ok = parse_family_file("# comment\nn=3 mode=substructure\n\n0*1\n110\n").unwrap();
        assert_eq!(ok.len(), 2);
    }
}
