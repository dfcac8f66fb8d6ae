use crate::error::{Error, Result};

/// One sample's activation at a tapped layer.
#[derive(Debug, Clone, PartialEq)]
pub enum RawActivation {
    /// `H×W×C`, channel-last, row-major.
    Map {
        height: usize,
        width: usize,
        channels: usize,
        values: Vec<f64>,
    },
    /// `T×E` token embeddings; with a class token it is row 0.
    Tokens {
        tokens: usize,
        embed: usize,
        values: Vec<f64>,
        has_class_token: bool,
    },
}

impl RawActivation {
    pub fn map(height: usize, width: usize, channels: usize, values: Vec<f64>) -> Result<Self> {
        check(&[height, width, channels], &values)?;
        Ok(RawActivation::Map {
            height,
            width,
            channels,
            values,
        })
    }

    pub fn tokens(tokens: usize, embed: usize, values: Vec<f64>, has_class_token: bool) -> Result<Self> {
        check(&[tokens, embed], &values)?;
        Ok(RawActivation::Tokens {
            tokens,
            embed,
            values,
            has_class_token,
        })
    }
}

fn check(dims: &[usize], values: &[f64]) -> Result<()> {
    if dims.contains(&0) {
        return Err(Error::invalid(format!("activation shape {dims:?} has an empty axis")));
    }
    let len: usize = dims.iter().product();
    if values.len() != len {
        return Err(Error::invalid(format!("{} values for shape {dims:?}", values.len())));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("activation contains non-finite values"));
    }
    Ok(())
}

/// Global average pooling for maps; class token, else token mean, for tokens.
pub fn vectorize(raw: &RawActivation) -> Vec<f64> {
    match raw {
        RawActivation::Map { channels, values, .. } => column_mean(values, *channels),
        RawActivation::Tokens {
            embed,
            values,
            has_class_token: true,
            ..
        } => values[..*embed].to_vec(),
        RawActivation::Tokens { embed, values, .. } => column_mean(values, *embed),
    }
}

fn column_mean(values: &[f64], width: usize) -> Vec<f64> {
    let rows = values.len() / width;
    let mut acc = vec![0.0; width];
    for row in values.chunks_exact(width) {
        acc.iter_mut().zip(row).for_each(|(a, v)| *a += v);
    }
    acc.iter_mut().for_each(|a| *a /= rows as f64);
    acc
}
