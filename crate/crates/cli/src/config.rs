//! Optional `key = value` settings file. Blank lines and `#` comments are ignored.

use std::path::Path;

use sagl::Error;

#[derive(Debug, Default, PartialEq)]
pub struct Config {
    pub seed: Option<u64>,
    pub beta: Option<f64>,
    pub max_retries: Option<u32>,
    pub strict_balance: Option<bool>,
    pub no_resample: Option<bool>,
    pub max_resamples: Option<u32>,
    pub audit: Option<bool>,
    pub geometric_audit: Option<bool>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, Error> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn parse(text: &str) -> Result<Self, Error> {
        let mut c = Config::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| Error::Syntax {
                line: i + 1,
                column: 1,
                message: msg.to_string(),
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err("expected key = value"))?;
            let value = value.trim().trim_matches('"');
            let key = key.trim().replace('-', "_");
            macro_rules! set {
                ($field:ident) => {
                    c.$field = Some(
                        value
                            .parse()
                            .map_err(|_| err(&format!("bad value for {key}")))?,
                    )
                };
            }
            match key.as_str() {
                "seed" => set!(seed),
                "beta" => set!(beta),
                "max_retries" => set!(max_retries),
                "strict_balance" => set!(strict_balance),
                "no_resample" => set!(no_resample),
                "max_resamples" => set!(max_resamples),
                "audit" => set!(audit),
                "geometric_audit" => set!(geometric_audit),
                _ => return Err(err(&format!("unknown key {key}"))),
            }
        }
        Ok(c)
    }
}
