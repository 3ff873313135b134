//! Fixed-step point-mass flight of a story's mission.

use std::collections::VecDeque;

use super::obstacles::{avoidance_offset, min_distance, place_obstacles};
use super::wind::wind_at;
use super::{SimConfig, SimError};
use crate::ids::trace_id;
use crate::model::{
    capability, story_issues, EventKind, Obstacle, TestModel, TestStory, TestTrace, TraceEvent,
    TraceRecord, Transition,
};
use crate::Vec3;

/// Gain of the approach and line-holding terms, 1/s. `1/(4·tau)` keeps the
/// lagged loop critically damped, so approaches do not overshoot.
fn guidance_gain(config: &SimConfig) -> f64 {
    1.0 / (4.0 * config.tau)
}

/// Desired ground velocity for following segment `a`→`b`: along the
/// segment at up to `cruise`, slowing in proportion to the remaining
/// distance, plus a correction back onto the line.
fn guidance(pos: Vec3, a: Vec3, b: Vec3, cruise: f64, k: f64) -> Vec3 {
    let Some(dir) = (b - a).normalized() else {
        return (b - pos) * k;
    };
    let remaining = (b - pos).dot(dir);
    let along = dir * (k * remaining).clamp(-cruise, cruise);
    let on_line = b - dir * remaining;
    let lateral = (on_line - pos) * k;
    (along + lateral).clamp_norm(cruise)
}

/// Mission progress that drives the SuT state machine.
#[derive(Clone, Copy, PartialEq)]
enum Milestone {
    FirstWaypoint,
    FinalWaypoint,
    Landed,
}

/// When each transition of the machine's shortest initial→final path fires.
/// The last three are tied to flight milestones; the rest run on the ground
/// one second apart before departure.
fn schedule<'a>(path: &[&'a Transition]) -> (Vec<&'a Transition>, Vec<(Milestone, &'a Transition)>) {
    let n = path.len();
    let tail = n.min(3);
    let ground = path[..n - tail].to_vec();
    let marks = [Milestone::FirstWaypoint, Milestone::FinalWaypoint, Milestone::Landed];
    let flight = path[n - tail..]
        .iter()
        .zip(&marks[3 - tail..])
        .map(|(t, m)| (*m, *t))
        .collect();
    (ground, flight)
}

fn fire<'a>(flight: &mut Vec<(Milestone, &'a Transition)>, mark: Milestone, pending: &mut VecDeque<&'a Transition>) {
    while let Some(i) = flight.iter().position(|(m, _)| *m == mark) {
        pending.push_back(flight.remove(i).1);
    }
}

/// Runs `story` and returns its trace. The run ends after touchdown once the
/// SuT reaches its final state, when the battery is depleted, on a collision
/// while avoidance is active, or at `max_duration`. Without avoidance a
/// collision is recorded and the flight continues.
pub fn run_story(story: &TestStory, test: &TestModel, config: &SimConfig) -> Result<TestTrace, SimError> {
    config.validate()?;
    if let Some(reason) = story_issues(story, None).into_iter().next() {
        return Err(SimError::Story(reason));
    }
    let m = &story.mission;
    if m.cruise_speed > config.v_max {
        return Err(SimError::Story(format!(
            "cruise_speed {} exceeds v_max {}",
            m.cruise_speed, config.v_max
        )));
    }
    let env = &story.environment;
    let obstacles: Vec<Obstacle> = place_obstacles(env, m, story.seed, config.wp_tolerance)?;
    let avoidance = test.requires(capability::AVOIDANCE).is_some();

    let machine = &test.machine;
    let path = machine.path_to_final().unwrap_or_default();
    let (ground, mut flight) = schedule(&path);
    let mut state = machine
        .initial_state()
        .map(|s| s.to_string())
        .unwrap_or_default();
    let mut pending: VecDeque<&Transition> = VecDeque::new();

    let route = m.route();
    let k = guidance_gain(config);
    let depart_at = ground.len() as f64;
    let mut ground_iter = ground.into_iter().enumerate().peekable();

    let mut records = Vec::new();
    let mut events = Vec::new();
    let mut pos = m.home;
    let mut cmd = Vec3::zero();
    let mut battery = 100.0_f64;
    let mut leg = 0usize; // index into route of the segment start
    let mut landed = false;
    let mut in_contact = false;
    let mut depleted = false;

    for i in 0.. {
        let t = i as f64 * config.dt;
        let wind = wind_at(&env.wind, story.seed, t);
        let airborne = t >= depart_at && !landed;
        let mut stop = false;

        while let Some((j, tr)) = ground_iter.peek() {
            if t + 1e-9 >= (*j as f64) + 1.0 {
                pending.push_back(tr);
                ground_iter.next();
            } else {
                break;
            }
        }

        if airborne {
            let contact = pos.z < 0.0 || min_distance(pos, &obstacles) < config.drone_radius;
            if contact && !in_contact {
                let detail = if pos.z < 0.0 { "terrain" } else { "obstacle" };
                events.push(TraceEvent { t, kind: EventKind::Collision, detail: detail.into() });
                if avoidance {
                    events.push(TraceEvent { t, kind: EventKind::Abort, detail: "collision".into() });
                    stop = true;
                }
            }
            in_contact = contact;

            let target = route[leg + 1];
            let is_land = leg + 2 == route.len();
            // Touchdown: down to the landing height anywhere inside the
            // landing zone. Near obstacles the vehicle may settle a little
            // off the exact point.
            let reached = if is_land {
                (pos.z - target.z).abs() < config.land_tolerance
                    && (pos - target).horizontal().norm() < config.wp_tolerance
            } else {
                pos.distance(target) < config.wp_tolerance
            };
            if !stop && reached {
                if is_land {
                    landed = true;
                    events.push(TraceEvent { t, kind: EventKind::Landed, detail: String::new() });
                    fire(&mut flight, Milestone::Landed, &mut pending);
                } else {
                    events.push(TraceEvent {
                        t,
                        kind: EventKind::WaypointReached,
                        detail: format!("{}", leg),
                    });
                    if leg == 0 {
                        fire(&mut flight, Milestone::FirstWaypoint, &mut pending);
                    }
                    if leg + 1 == m.waypoints.len() {
                        fire(&mut flight, Milestone::FinalWaypoint, &mut pending);
                    }
                    leg += 1;
                }
            }
        }

        // One state change per record, so every transition is observable.
        if let Some(tr) = pending.pop_front() {
            if tr.from == state.as_str() {
                state = tr.to.to_string();
                events.push(TraceEvent { t, kind: EventKind::Transition, detail: tr.event.clone() });
            }
        }

        if depleted {
            events.push(TraceEvent { t, kind: EventKind::BatteryDepleted, detail: String::new() });
            stop = true;
        }
        let flying = airborne && !landed;
        let vel = if flying { cmd + wind } else { Vec3::zero() };
        records.push(TraceRecord {
            t,
            pos,
            vel,
            cmd_vel: if flying { cmd } else { Vec3::zero() },
            wind,
            sut_state: state.clone(),
            battery_pct: battery,
            obs_min_dist: min_distance(pos, &obstacles),
        });

        if stop || (landed && pending.is_empty() && flight.is_empty()) {
            break;
        }
        if t + config.dt > config.max_duration + 1e-9 {
            events.push(TraceEvent { t, kind: EventKind::Abort, detail: "max_duration".into() });
            break;
        }

        let applied = if flying { cmd } else { Vec3::zero() };
        battery -= (config.battery_a + config.battery_b * applied.norm_squared()) * config.dt;
        if battery <= 0.0 {
            battery = 0.0;
            depleted = true;
        }
        if flying {
            pos += vel * config.dt;
            let a = route[leg];
            let b = route[leg + 1];
            let mut desired = guidance(pos, a, b, m.cruise_speed, k) - wind;
            if avoidance {
                desired += avoidance_offset(pos, &obstacles, config);
            }
            let u = desired.clamp_norm(config.v_max);
            cmd += (u - cmd) * (config.dt / config.tau);
        }
    }

    let mut trace = TestTrace {
        id: crate::model::Ident::new("tr-pending").expect("static id"),
        story_id: story.id.clone(),
        lof: story.lof,
        records,
        events,
    };
    trace.id = trace_id(&trace);
    Ok(trace)
}
