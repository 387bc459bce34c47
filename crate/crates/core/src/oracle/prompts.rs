//! Prompt templates, one file per (task, version): `<task>.<version>.txt`.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use super::{OracleError, OracleRequest, Task};

const BUILTIN: [(Task, &str, &str); 4] = [
    (Task::Translate, "v1", include_str!("../../prompts/translate.v1.txt")),
    (
        Task::VerifyTranslation,
        "v1",
        include_str!("../../prompts/verify_translation.v1.txt"),
    ),
    (Task::ReasonStep, "v1", include_str!("../../prompts/reason_step.v1.txt")),
    (Task::VerifyStep, "v1", include_str!("../../prompts/verify_step.v1.txt")),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptRegistry {
    templates: BTreeMap<(Task, String), String>,
}

impl PromptRegistry {
    /// The templates shipped with the crate.
    pub fn builtin() -> Self {
        let mut templates = BTreeMap::new();
        for (task, version, text) in BUILTIN {
            templates.insert((task, version.to_string()), text.to_string());
        }
        PromptRegistry { templates }
    }

    pub fn len(&self) -> usize {
        self.templates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.templates.is_empty()
    }

    pub fn get(&self, task: Task, version: &str) -> Option<&str> {
        self.templates.get(&(task, version.to_string())).map(String::as_str)
    }

    pub fn versions(&self, task: Task) -> Vec<&str> {
        self.templates
            .keys()
            .filter(|(t, _)| *t == task)
            .map(|(_, v)| v.as_str())
            .collect()
    }

    pub fn render(&self, req: &OracleRequest) -> Result<String, OracleError> {
        let template = self
            .get(req.task, &req.prompt_version)
            .ok_or_else(|| OracleError::MissingTemplate {
                task: req.task,
                version: Some(req.prompt_version.clone()),
            })?;
        let mut out = template.to_string();
        for (name, value) in req.payload.fields() {
            out = out.replace(&format!("{{{{{name}}}}}"), &value);
        }
        Ok(out)
    }
}

fn check_placeholders(task: Task, version: &str, text: &str) -> Result<(), OracleError> {
    for field in task.required_fields() {
        if !text.contains(&format!("{{{{{field}}}}}")) {
            return Err(OracleError::MissingPlaceholder {
                task,
                version: version.to_string(),
                placeholder: field.to_string(),
            });
        }
    }
    Ok(())
}

/// Loads every `<task>.<version>.txt` in `dir`. Every task needs at least
/// one template and every template its task's placeholders.
pub fn load_prompts(dir: &Path) -> Result<PromptRegistry, OracleError> {
    let mut templates = BTreeMap::new();
    let entries = fs::read_dir(dir).map_err(|e| OracleError::Io(format!("{}: {e}", dir.display())))?;
    let mut paths: Vec<_> = entries.filter_map(|e| e.ok().map(|e| e.path())).collect();
    paths.sort();
    for path in paths {
        let Some(name) = path.file_name().and_then(|n| n.to_str()) else { continue };
        let Some(stem) = name.strip_suffix(".txt") else { continue };
        let Some((task_name, version)) = stem.split_once('.') else { continue };
        let Ok(task) = task_name.parse::<Task>() else { continue };
        if version.is_empty() {
            continue;
        }
        let text = fs::read_to_string(&path).map_err(|e| OracleError::Io(format!("{}: {e}", path.display())))?;
        check_placeholders(task, version, &text)?;
        templates.insert((task, version.to_string()), text);
    }
    for task in Task::ALL {
        if !templates.keys().any(|(t, _)| *t == task) {
            return Err(OracleError::MissingTemplate { task, version: None });
        }
    }
    Ok(PromptRegistry { templates })
}
