use std::io::Read;

use semialg_core::{parse_poly, parse_poly_auto, Error, MPoly, Mat, Rat, SymMat, UPoly};

/// Reads `@path` from a file and `-` from stdin; anything else is literal.
pub fn payload(arg: &str) -> Result<String, Error> {
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Input(format!("stdin: {e}")))?;
        return Ok(s.trim().to_string());
    }
    if let Some(path) = arg.strip_prefix('@') {
        let s = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{path}: {e}")))?;
        return Ok(s.trim().to_string());
    }
    Ok(arg.to_string())
}

pub fn poly(arg: &str, nvars: Option<usize>) -> Result<MPoly, Error> {
    let text = payload(arg)?;
    match nvars {
        Some(n) => parse_poly(&text, n),
        None => parse_poly_auto(&text),
    }
}

/// Polynomials sharing one ring: the given `n`, or the largest index used.
pub fn polys(args: &[String], nvars: Option<usize>) -> Result<Vec<MPoly>, Error> {
    let texts = args.iter().map(|a| payload(a)).collect::<Result<Vec<_>, _>>()?;
    let n = match nvars {
        Some(n) => n,
        None => texts.iter().map(|t| parse_poly_auto(t).map(|p| p.nvars())).try_fold(1, |m, k| k.map(|k| m.max(k)))?,
    };
    texts.iter().map(|t| parse_poly(t, n)).collect()
}

pub fn upoly(arg: &str) -> Result<UPoly, Error> {
    parse_poly(&payload(arg)?, 1)?.to_upoly()
}

pub fn rat(text: &str) -> Result<Rat, Error> {
    text.trim().parse::<Rat>().map_err(|_| Error::InvalidRational(text.trim().to_string()))
}

/// Comma-separated rationals.
pub fn vector(text: &str) -> Result<Vec<Rat>, Error> {
    text.split(',').map(rat).collect()
}

/// Rows separated by `;`, entries by `,`.
pub fn rows(text: &str) -> Result<Vec<Vec<Rat>>, Error> {
    payload(text)?.split(';').filter(|r| !r.trim().is_empty()).map(vector).collect()
}

pub fn matrix(text: &str) -> Result<Mat, Error> {
    Mat::from_rows(rows(text)?)
}

pub fn sym_matrix(text: &str) -> Result<SymMat, Error> {
    SymMat::from_mat(&matrix(text)?)
}
