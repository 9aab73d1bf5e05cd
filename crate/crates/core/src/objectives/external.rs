use std::process::Command;

use super::{Objective, ObjectiveError};

/// Scores a point by running a shell command.
///
/// `{theta0}` … `{thetaN}` in the template are replaced by the coordinates in
/// shortest round-trip decimal form; the last non-empty line of standard
/// output is parsed as the score. The command runs under `sh -c` and is
/// waited on before returning, success or not.
#[derive(Debug, Clone)]
pub struct ExternalCommand {
    template: String,
}

impl ExternalCommand {
    pub fn new(template: impl Into<String>) -> Self {
        Self {
            template: template.into(),
        }
    }

    pub fn template(&self) -> &str {
        &self.template
    }

    pub fn render(&self, theta: &[f64]) -> String {
        let mut cmd = self.template.clone();
        // high indices first so `{theta1}` never clobbers `{theta10}`
        for (i, v) in theta.iter().enumerate().rev() {
            cmd = cmd.replace(&format!("{{theta{i}}}"), &v.to_string());
        }
        cmd
    }
}

impl Objective for ExternalCommand {
    fn evaluate(&self, theta: &[f64]) -> Result<f64, ObjectiveError> {
        let command = self.render(theta);
        let output = Command::new("sh")
            .arg("-c")
            .arg(&command)
            .output()
            .map_err(|e| ObjectiveError::Spawn {
                command: command.clone(),
                message: e.to_string(),
            })?;
        let stdout = String::from_utf8_lossy(&output.stdout).into_owned();
        if !output.status.success() {
            return Err(ObjectiveError::CommandFailed {
                command,
                status: output.status.to_string(),
                stdout,
                stderr: String::from_utf8_lossy(&output.stderr).into_owned(),
            });
        }
        stdout
            .lines()
            .rev()
            .map(str::trim)
            .find(|l| !l.is_empty())
            .and_then(|l| l.parse::<f64>().ok())
            .filter(|v| v.is_finite())
            .ok_or(ObjectiveError::Unparseable { command, stdout })
    }

    fn description(&self) -> String {
        format!("external command `{}`", self.template)
    }

    fn deterministic(&self) -> bool {
        false
    }
}
