//! Geometric cooling schedule shared by the topology search and the local
//! routing solver.

use rand::Rng;

/// Temperatures are in the same integer units as the objective deltas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Schedule {
    pub initial_temp: f64,
    pub decay: f64,
    pub steps_per_temp: u64,
}

impl Schedule {
    pub fn new(initial_temp: f64, decay: f64, steps_per_temp: u64) -> Self {
        Schedule {
            initial_temp,
            decay,
            steps_per_temp,
        }
    }

    pub(crate) fn is_valid(&self) -> bool {
        self.initial_temp >= 0.0
            && self.decay > 0.0
            && self.decay <= 1.0
            && self.steps_per_temp > 0
    }
}

/// Tracks the current temperature; reheats once it has cooled by three
/// orders of magnitude so long runs keep escaping plateaus.
#[derive(Debug, Clone)]
pub(crate) struct Thermostat {
    schedule: Schedule,
    temp: f64,
    steps: u64,
}

impl Thermostat {
    pub fn new(schedule: Schedule) -> Self {
        Thermostat {
            schedule,
            temp: schedule.initial_temp,
            steps: 0,
        }
    }

    /// Improvements and sideways moves always pass; a worsening `delta`
    /// passes with probability `exp(-delta / T)`.
    pub fn accept<R: Rng>(&self, delta: i64, rng: &mut R) -> bool {
        if delta <= 0 {
            return true;
        }
        if self.temp <= 0.0 {
            return false;
        }
        rng.gen::<f64>() < (-(delta as f64) / self.temp).exp()
    }

    pub fn tick(&mut self) {
        self.steps += 1;
        if self.steps % self.schedule.steps_per_temp == 0 {
            self.temp *= self.schedule.decay;
            if self.temp < self.schedule.initial_temp * 1e-3 {
                self.temp = self.schedule.initial_temp;
            }
        }
    }
}
