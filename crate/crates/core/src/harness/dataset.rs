use std::fs;
use std::io::Write;
use std::path::Path;

use serde_json::Value;

use super::{Choice, HarnessError, ProblemInstance, VERDICT_LABELS};

fn schema(line: usize, field: &str) -> HarnessError {
    HarnessError::Schema {
        line,
        field: field.to_string(),
    }
}

fn string_field(obj: &serde_json::Map<String, Value>, line: usize, field: &str) -> Result<String, HarnessError> {
    match obj.get(field) {
        Some(Value::String(s)) if !s.trim().is_empty() => Ok(s.clone()),
        _ => Err(schema(line, field)),
    }
}

fn parse_line(text: &str, line: usize) -> Result<ProblemInstance, HarnessError> {
    let value: Value = serde_json::from_str(text).map_err(|_| schema(line, "<json>"))?;
    let obj = value.as_object().ok_or_else(|| schema(line, "<json>"))?;
    let id = string_field(obj, line, "id")?;
    let premises = match obj.get("premises") {
        Some(Value::Array(items)) if !items.is_empty() => items
            .iter()
            .map(|p| p.as_str().map(str::to_string))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| schema(line, "premises"))?,
        _ => return Err(schema(line, "premises")),
    };
    let conclusion = string_field(obj, line, "conclusion")?;
    let options = match obj.get("options") {
        None | Some(Value::Null) => None,
        Some(v) => {
            let options: Vec<Choice> = serde_json::from_value(v.clone()).map_err(|_| schema(line, "options"))?;
            if options.is_empty() {
                return Err(schema(line, "options"));
            }
            Some(options)
        }
    };
    let gold = string_field(obj, line, "gold")?;
    let depth = match obj.get("depth") {
        None | Some(Value::Null) => None,
        Some(v) => Some(v.as_u64().ok_or_else(|| schema(line, "depth"))? as usize),
    };
    let valid_gold = match &options {
        Some(options) => options.iter().any(|o| o.label == gold),
        None => VERDICT_LABELS.contains(&gold.as_str()),
    };
    if !valid_gold {
        return Err(schema(line, "gold"));
    }
    Ok(ProblemInstance {
        id,
        premises,
        conclusion,
        options,
        gold,
        depth,
    })
}

/// Parses JSONL text; blank lines are ignored, anything else malformed
/// aborts with its 1-based line number.
pub fn parse_dataset(text: &str) -> Result<Vec<ProblemInstance>, HarnessError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| parse_line(l, i + 1))
        .collect()
}

pub fn load_dataset(path: &Path) -> Result<Vec<ProblemInstance>, HarnessError> {
    let text = fs::read_to_string(path).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))?;
    parse_dataset(&text)
}

pub fn write_dataset(instances: &[ProblemInstance], out: &mut impl Write) -> Result<(), HarnessError> {
    for inst in instances {
        serde_json::to_writer(&mut *out, inst).map_err(|e| HarnessError::Io(e.to_string()))?;
        out.write_all(b"\n")?;
    }
    Ok(())
}
