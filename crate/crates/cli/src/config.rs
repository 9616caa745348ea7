//! Config file handling: a JSON object whose keys mirror the long flag
//! names. Explicit flags always override config fields.

use crate::error::{CliError, Result};
use crate::output::Format;
use serde_json::{Map, Value};
use std::fs;

/// Universal settings resolved from flags and config before dispatch.
pub struct RunSettings {
    pub seed: u64,
    pub format: Format,
    pub cap: u64,
}

/// Keys every command accepts in a config file, alongside its own
/// parameters: run plumbing and the schema/command echo.
const UNIVERSAL_KEYS: [&str; 7] = ["schema", "command", "seed", "out", "format", "threads", "cap"];

/// Parsed `--config` payload. Empty when no config was given.
pub struct FileConfig {
    map: Map<String, Value>,
}

impl FileConfig {
    /// Loads a config from a file path, or parses it inline when the
    /// argument itself starts with `{`.
    pub fn load(arg: Option<&str>) -> Result<Self> {
        let Some(arg) = arg else {
            return Ok(FileConfig { map: Map::new() });
        };
        let text = if arg.trim_start().starts_with('{') {
            arg.to_string()
        } else {
            fs::read_to_string(arg)
                .map_err(|e| CliError::Config(format!("cannot read config {arg}: {e}")))?
        };
        let value: Value = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("config is not valid JSON: {e}")))?;
        let Value::Object(map) = value else {
            return Err(CliError::Config("config must be a JSON object".into()));
        };
        if let Some(schema) = map.get("schema") {
            if schema.as_u64() != Some(1) {
                return Err(CliError::Config(format!(
                    "unsupported config schema {schema}, expected 1"
                )));
            }
        }
        Ok(FileConfig { map })
    }

    /// Rejects a config key that no parameter of the running command reads.
    pub fn allow(&self, keys: &[&str]) -> Result<()> {
        for key in self.map.keys() {
            if !keys.contains(&key.as_str()) && !UNIVERSAL_KEYS.contains(&key.as_str()) {
                return Err(CliError::Config(format!("unknown config key `{key}`")));
            }
        }
        Ok(())
    }

    /// Checks the optional `command` echo field against the invoked command.
    pub fn check_command(&self, invoked: &str) -> Result<()> {
        let Some(value) = self.map.get("command") else {
            return Ok(());
        };
        let Some(name) = value.as_str() else {
            return Err(CliError::Config("config key `command` must be a string".into()));
        };
        if crate::canonical_command(name) != invoked {
            return Err(CliError::Config(format!(
                "config is for `{name}` but the invoked command is `{invoked}`"
            )));
        }
        Ok(())
    }

    fn field(&self, key: &str) -> Option<&Value> {
        self.map.get(key)
    }

    pub fn get_u64(&self, key: &str) -> Result<Option<u64>> {
        match self.field(key) {
            None => Ok(None),
            Some(v) => v
                .as_u64()
                .map(Some)
                .ok_or_else(|| bad_type(key, "a nonnegative integer")),
        }
    }

    pub fn get_usize(&self, key: &str) -> Result<Option<usize>> {
        Ok(self.get_u64(key)?.map(|v| v as usize))
    }

    pub fn get_i64(&self, key: &str) -> Result<Option<i64>> {
        match self.field(key) {
            None => Ok(None),
            Some(v) => v.as_i64().map(Some).ok_or_else(|| bad_type(key, "an integer")),
        }
    }

    pub fn get_f64(&self, key: &str) -> Result<Option<f64>> {
        match self.field(key) {
            None => Ok(None),
            Some(v) => v.as_f64().map(Some).ok_or_else(|| bad_type(key, "a number")),
        }
    }

    pub fn get_string(&self, key: &str) -> Result<Option<String>> {
        match self.field(key) {
            None => Ok(None),
            Some(v) => v
                .as_str()
                .map(|s| Some(s.to_string()))
                .ok_or_else(|| bad_type(key, "a string")),
        }
    }

    /// Number list; a bare number is accepted as a one-element list.
    pub fn get_f64_list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        match self.field(key) {
            None => Ok(None),
            Some(Value::Number(_)) => Ok(Some(vec![self.get_f64(key)?.unwrap()])),
            Some(Value::Array(items)) => items
                .iter()
                .map(|v| v.as_f64().ok_or_else(|| bad_type(key, "a list of numbers")))
                .collect::<Result<Vec<f64>>>()
                .map(Some),
            Some(_) => Err(bad_type(key, "a list of numbers")),
        }
    }

    pub fn get_i64_list(&self, key: &str) -> Result<Option<Vec<i64>>> {
        match self.field(key) {
            None => Ok(None),
            Some(Value::Array(items)) => items
                .iter()
                .map(|v| v.as_i64().ok_or_else(|| bad_type(key, "a list of integers")))
                .collect::<Result<Vec<i64>>>()
                .map(Some),
            Some(_) => Err(bad_type(key, "a list of integers")),
        }
    }

    /// Integer matrix as an array of row arrays.
    pub fn get_rows(&self, key: &str) -> Result<Option<Vec<Vec<i64>>>> {
        match self.field(key) {
            None => Ok(None),
            Some(v) => parse_rows(v).map(Some).map_err(|()| bad_type(key, "a matrix of integers")),
        }
    }

    /// List of integer matrices.
    pub fn get_matrix_list(&self, key: &str) -> Result<Option<Vec<Vec<Vec<i64>>>>> {
        match self.field(key) {
            None => Ok(None),
            Some(Value::Array(items)) => items
                .iter()
                .map(|v| parse_rows(v).map_err(|()| bad_type(key, "a list of integer matrices")))
                .collect::<Result<Vec<_>>>()
                .map(Some),
            Some(_) => Err(bad_type(key, "a list of integer matrices")),
        }
    }
}

fn bad_type(key: &str, expected: &str) -> CliError {
    CliError::Config(format!("config key `{key}` must be {expected}"))
}

fn parse_rows(v: &Value) -> std::result::Result<Vec<Vec<i64>>, ()> {
    let Value::Array(rows) = v else { return Err(()) };
    rows.iter()
        .map(|row| {
            let Value::Array(items) = row else { return Err(()) };
            items.iter().map(|x| x.as_i64().ok_or(())).collect()
        })
        .collect()
}

/// Parses a `--transform` style flag: a JSON array of integer rows.
pub fn rows_from_str(text: &str, what: &str) -> Result<Vec<Vec<i64>>> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| CliError::Config(format!("{what} is not valid JSON: {e}")))?;
    parse_rows(&value).map_err(|()| CliError::Config(format!("{what} must be a matrix of integers")))
}

/// Parses a `--candidates` style flag: a JSON array of integer matrices.
pub fn matrix_list_from_str(text: &str, what: &str) -> Result<Vec<Vec<Vec<i64>>>> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| CliError::Config(format!("{what} is not valid JSON: {e}")))?;
    let Value::Array(items) = value else {
        return Err(CliError::Config(format!("{what} must be a list of integer matrices")));
    };
    items
        .iter()
        .map(|v| {
            parse_rows(v)
                .map_err(|()| CliError::Config(format!("{what} must be a list of integer matrices")))
        })
        .collect()
}

/// Flag-over-config resolution for one parameter.
pub fn pick<T>(flag: Option<T>, file: Option<T>) -> Option<T> {
    flag.or(file)
}

/// Unwraps a resolved parameter or names what is missing.
pub fn require<T>(value: Option<T>, what: &str) -> Result<T> {
    value.ok_or_else(|| {
        CliError::Config(format!("missing required parameter `{what}` (flag or config key)"))
    })
}
