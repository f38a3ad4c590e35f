//! TOML game configuration.
//!
//! ```toml
//! a = 0.0
//! b = [1.0, 1.0]
//! q = [1.0, 1.0]
//! r = [1.0, 1.0]
//! x0 = 1.0
//! mu = [0.5, 0.5]                      # optional, uniform by default
//! lambda = [[0.75, 0.25], [0.25, 0.75]]  # optional
//! ```

use std::ops::Range;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use toml::Spanned;

use crate::error::Error;
use crate::game::{validate_spec, CooperationMatrix, GameSpec, ValidatedGame, WeightVector};
use crate::scalar::Tolerances;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {message}", location(*line))]
    Parse { message: String, line: Option<usize> },
    #[error("{}: invalid `{field}`: {source}", location(*line))]
    Invalid {
        field: String,
        line: Option<usize>,
        source: Error,
    },
}

fn location(line: Option<usize>) -> String {
    line.map_or_else(|| "config".into(), |l| format!("config line {l}"))
}

impl ConfigError {
    pub fn line(&self) -> Option<usize> {
        match self {
            Self::Io { .. } => None,
            Self::Parse { line, .. } | Self::Invalid { line, .. } => *line,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    a: Spanned<f64>,
    b: Spanned<Vec<f64>>,
    q: Spanned<Vec<f64>>,
    r: Spanned<Vec<f64>>,
    x0: Spanned<f64>,
    mu: Option<Spanned<Vec<f64>>>,
    lambda: Option<Spanned<Vec<Vec<f64>>>>,
}

impl RawConfig {
    fn span_of(&self, field: &str) -> Option<Range<usize>> {
        match field {
            "a" => Some(self.a.span()),
            "b" => Some(self.b.span()),
            "q" => Some(self.q.span()),
            "r" => Some(self.r.span()),
            "x0" => Some(self.x0.span()),
            "mu" => self.mu.as_ref().map(Spanned::span),
            "lambda" => self.lambda.as_ref().map(Spanned::span),
            _ => None,
        }
    }
}

/// A validated game plus the optional cooperation matrix.
#[derive(Debug, Clone)]
pub struct GameConfig {
    pub game: ValidatedGame<f64>,
    pub lambda: Option<CooperationMatrix<f64>>,
}

pub fn load_config(path: impl AsRef<Path>) -> Result<GameConfig, ConfigError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<GameConfig, ConfigError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| ConfigError::Parse {
        message: e.message().to_owned(),
        line: e.span().map(|s| line_of(text, s.start)),
    })?;
    let invalid = |source: Error| {
        let field = base_field(&source).to_owned();
        let line = raw.span_of(&field).map(|s| line_of(text, s.start));
        ConfigError::Invalid { field, line, source }
    };
    let n = raw.b.get_ref().len();
    let spec = GameSpec::new(
        *raw.a.get_ref(),
        raw.b.get_ref().clone(),
        raw.q.get_ref().clone(),
        raw.r.get_ref().clone(),
        *raw.x0.get_ref(),
    );
    let mu = match &raw.mu {
        Some(m) => WeightVector::new(m.get_ref().clone()),
        None if n == 0 => WeightVector::new(Vec::new()),
        None => WeightVector::uniform(n),
    };
    let game = validate_spec(spec, mu).map_err(invalid)?;
    let lambda = match &raw.lambda {
        Some(l) => {
            let m = CooperationMatrix::new(l.get_ref().clone());
            m.validate(n, &Tolerances::default()).map_err(invalid)?;
            Some(m)
        }
        None => None,
    };
    Ok(GameConfig { game, lambda })
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// Config key an error refers to, e.g. `q` for `q[2]`.
fn base_field(e: &Error) -> &str {
    let field = match e {
        Error::NonPositiveWeight { field, .. }
        | Error::ZeroGain { field }
        | Error::WeightSumMismatch { field, .. }
        | Error::LengthMismatch { field, .. }
        | Error::NonFinite { field }
        | Error::NegativeAltruism { field, .. }
        | Error::ZeroSelfWeight { field, .. } => field.as_str(),
        Error::ZeroInitialState => "x0",
        Error::NoPlayers => "b",
        _ => "",
    };
    field.split('[').next().unwrap_or(field)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FLOW2: &str = "a = 0\nb = [1, 1]\nq = [1.0, 1.0]\nr = [1.0, 1.0]\nx0 = 1.0\n";

    #[test]
    fn parses_minimal_config() {
        let c = parse_config(FLOW2).unwrap();
        assert_eq!(c.game.n(), 2);
        assert_eq!(c.game.mu().mu, vec![0.5, 0.5]);
        assert!(c.lambda.is_none());
    }

    #[test]
    fn parses_weights_and_lambda() {
        let text = format!("{FLOW2}mu = [0.25, 0.75]\nlambda = [[0.75, 0.25], [0.25, 0.75]]\n");
        let c = parse_config(&text).unwrap();
        assert_eq!(c.game.mu().mu, vec![0.25, 0.75]);
        assert_eq!(c.lambda.unwrap().rows[1], vec![0.25, 0.75]);
    }

    #[test]
    fn invalid_value_names_field_and_line() {
        let text = "a = 0\nb = [1, 1]\nq = [-1.0, 1.0]\nr = [1.0, 1.0]\nx0 = 1.0\n";
        let e = parse_config(text).unwrap_err();
        match &e {
            ConfigError::Invalid { field, line, .. } => {
                assert_eq!(field, "q");
                assert_eq!(*line, Some(3));
            }
            other => panic!("{other}"),
        }
        let msg = e.to_string();
        assert!(msg.contains("line 3") && msg.contains("q[0]"), "{msg}");
    }

    #[test]
    fn length_mismatch_and_lambda_errors() {
        let e = parse_config("a = 0\nb = [1, 1]\nq = [1.0]\nr = [1.0, 1.0]\nx0 = 1.0\n").unwrap_err();
        assert!(matches!(e, ConfigError::Invalid { ref field, .. } if field == "q"));
        let text = format!("{FLOW2}lambda = [[0.0, 1.0], [0.5, 0.5]]\n");
        let e = parse_config(&text).unwrap_err();
        assert!(matches!(e, ConfigError::Invalid { ref field, line: Some(6), .. } if field == "lambda"));
    }

    #[test]
    fn syntax_and_schema_errors_have_lines() {
        let e = parse_config("a = 0\nb = [1, 1\nq = [1]\n").unwrap_err();
        assert!(matches!(e, ConfigError::Parse { line: Some(_), .. }));
        let e = parse_config(&format!("{FLOW2}gamma = 2\n")).unwrap_err();
        assert_eq!(e.line(), Some(6));
        let e = parse_config("a = 0\nb = [1]\nq = [1]\nr = [1]\n").unwrap_err();
        assert!(e.to_string().contains("x0"), "{e}");
    }
}
