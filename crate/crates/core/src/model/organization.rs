use serde::{Deserialize, Serialize};

use super::{ActorId, ArtifactId, TeamId};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Team {
    pub id: TeamId,
    pub name: String,
    pub responsible_for: ArtifactId,
    /// Filled in as actors join; never edited directly.
    #[serde(default)]
    pub members: Vec<ActorId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActorRecord {
    pub id: ActorId,
    pub name: String,
    pub role: String,
    pub team: TeamId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Competence {
    pub actor: ActorId,
    pub domain: String,
    pub level: u32,
}

/// Collaboration frequency between two distinct teams, stored with `a < b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TeamInteraction {
    pub a: TeamId,
    pub b: TeamId,
    pub frequency: f64,
}

/// Square team-by-team frequency matrix. Rows follow team insertion order.
#[derive(Debug, Clone, PartialEq)]
pub struct TeamMatrix {
    teams: Vec<TeamId>,
    values: Vec<f64>,
}

impl TeamMatrix {
    pub(crate) fn new(teams: Vec<TeamId>, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), teams.len() * teams.len());
        Self { teams, values }
    }

    pub fn dim(&self) -> usize {
        self.teams.len()
    }

    pub fn teams(&self) -> &[TeamId] {
        &self.teams
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.dim() + col]
    }

    pub fn transpose(&self) -> TeamMatrix {
        let n = self.dim();
        let mut values = vec![0.0; n * n];
        for row in 0..n {
            for col in 0..n {
                values[col * n + row] = self.get(row, col);
            }
        }
        TeamMatrix::new(self.teams.clone(), values)
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks(self.dim().max(1)).take(self.dim())
    }
}
