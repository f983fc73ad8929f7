//! One check per acceptance criterion. Each prints a PASS/FAIL line with the
//! measured values; the test fails if any check fails.

mod common;

use std::collections::HashMap;
use std::io::Write;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use common::{data, Api, Server};
use miriam_core::batch::{evaluate_corpus, parse_corpus};
use miriam_core::config::{
    Config, BUNDLED_LEXICON, BUNDLED_RULES, BUNDLED_TEMPLATES, DEMO_PLAN, DEMO_SCENARIO,
};
use miriam_core::dialogue::MessageKind;
use miriam_core::mission::{
    load_plan, Estimate, EventType, MissionEvent, MissionStore, StreamRecord, Target, Waypoint,
};
use miriam_core::nlu::{DialogueContext, IntentLabel, SlotSource, SlotType};
use miriam_core::runtime::MissionRuntime;
use miriam_core::sim::{Scenario, Simulator};
use rand::{Rng, SeedableRng};

const DIALOGUE_BUDGET: Duration = Duration::from_secs(1);
const RANDOM_NAMES: usize = 50;
const CORPUS_MIN: usize = 60;
const CORPUS_PER_INTENT: usize = 4;
const CORPUS_ACCURACY: f64 = 0.95;
/// ETA error bound, in telemetry intervals.
const ETA_INTERVALS: f64 = 2.0;
const PROGRESS_TOL_PCT: f64 = 0.1;
const DETOUR_TOL_M: f64 = 0.1;
const DETOUR_OFFSET_M: f64 = 50.0;
const FAULT_AT: f64 = 200.0;
const THROTTLE_GAP_S: f64 = 30.0;
const REMINDER_DELAY_S: f64 = 300.0;
const E2E_BUDGET: Duration = Duration::from_secs(30);
const PARITY_START_AT: &str = "300";

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn runtime(scenario: &str) -> MissionRuntime {
    MissionRuntime::new(
        &Config::bundled(),
        load_plan(DEMO_PLAN).unwrap(),
        Scenario::parse(scenario).unwrap(),
    )
    .unwrap()
}

fn no_script() -> Scenario {
    Scenario::parse(r#"{"seed": 7}"#).unwrap()
}

fn paper_dialogue() -> Check {
    let mut rt = runtime(DEMO_SCENARIO);
    rt.open_session("op");
    rt.advance_to(100.0);
    let started = Instant::now();
    let a = rt.handle_turn("op", "Where is Survey0?").unwrap().frame;
    let b = rt.handle_turn("op", "What time did it finish?").unwrap().frame;
    let c = rt.handle_turn("op", "What about Survey1?").unwrap().frame;
    let elapsed = started.elapsed();
    let expect = [
        (
            &a,
            IntentLabel::ObjectiveLocation,
            "Survey0",
            SlotSource::Explicit,
        ),
        (
            &b,
            IntentLabel::ObjectiveFinishTime,
            "Survey0",
            SlotSource::Anaphora,
        ),
        (
            &c,
            IntentLabel::ObjectiveLocation,
            "Survey1",
            SlotSource::Ellipsis,
        ),
    ];
    for (frame, intent, value, source) in expect {
        let slot = frame.slot_of_type(SlotType::Objective);
        ensure(
            frame.intent == intent
                && frame.clarification.is_none()
                && frame.slots.len() == 1
                && slot.map(|s| (s.value.as_str(), s.source)) == Some((value, source)),
            || {
                format!(
                    "{:?} gave {frame:?}, want {intent}({value}, {source:?})",
                    frame.raw
                )
            },
        )?;
    }
    ensure(elapsed < DIALOGUE_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("3/3 frames exact in {elapsed:?}"))
}

fn random_name(rng: &mut impl Rng) -> String {
    const C: &[u8] = b"bdfgklmnprstvz";
    const V: &[u8] = b"aeiou";
    let mut s = String::new();
    s.push((C[rng.gen_range(0..C.len())] as char).to_ascii_uppercase());
    for i in 0..rng.gen_range(3..7) {
        let set = if i % 2 == 0 { V } else { C };
        s.push(set[rng.gen_range(0..set.len())] as char);
    }
    s.push_str(&rng.gen_range(10..100).to_string());
    s
}

fn dynamic_lexicon() -> Check {
    let config_text = [BUNDLED_RULES, BUNDLED_LEXICON, BUNDLED_TEMPLATES, DEMO_PLAN]
        .concat()
        .to_lowercase();
    let mut rng = rand::rngs::StdRng::seed_from_u64(2017);
    let mut names: Vec<String> = Vec::new();
    while names.len() < RANDOM_NAMES {
        let n = random_name(&mut rng);
        if !config_text.contains(&n.to_lowercase()) && !names.iter().any(|m| m.eq_ignore_ascii_case(&n)) {
            names.push(n);
        }
    }
    let (vehicles, objectives) = names.split_at(10);
    let plan = serde_json::json!({
        "plan_id": "generated",
        "origin": { "lat": 0.0, "lon": 0.0 },
        "vehicles": vehicles.iter().map(|v| serde_json::json!({ "id": v, "cruise_speed": 1.0 })).collect::<Vec<_>>(),
        "objectives": objectives.iter().enumerate().map(|(i, o)| serde_json::json!({
            "name": o, "kind": "survey", "vehicle": vehicles[i % vehicles.len()],
            "depth": 5.0, "waypoints": [[10.0 * (i + 1) as f64, 0.0]]
        })).collect::<Vec<_>>(),
    });
    let plan = load_plan(&plan.to_string()).map_err(|e| e.to_string())?;
    let nlu = Config::bundled().nlu(&plan);
    let mut hits = 0;
    for (i, name) in names.iter().enumerate() {
        let (intent, ty) = if i < vehicles.len() {
            (IntentLabel::VehicleLocation, SlotType::Vehicle)
        } else {
            (IntentLabel::ObjectiveLocation, SlotType::Objective)
        };
        let frame = nlu.parse(&format!("where is {name}"), &mut DialogueContext::new());
        let slot = frame.slot_of_type(ty);
        ensure(
            frame.intent == intent
                && frame.clarification.is_none()
                && slot.map(|s| (s.value.as_str(), s.source)) == Some((name.as_str(), SlotSource::Explicit)),
            || format!("\"where is {name}\" gave {frame:?}"),
        )?;
        hits += 1;
    }
    Ok(format!("{hits}/{RANDOM_NAMES} explicit slots"))
}

fn intent_corpus() -> Check {
    let text = std::fs::read_to_string(data("intent_corpus.tsv")).map_err(|e| e.to_string())?;
    let entries = parse_corpus(&text, "intent_corpus.tsv").map_err(|e| e.to_string())?;
    ensure(entries.len() >= CORPUS_MIN, || {
        format!("only {} utterances", entries.len())
    })?;
    for intent in IntentLabel::ALL {
        let n = entries.iter().filter(|e| e.intent == intent).count();
        ensure(n >= CORPUS_PER_INTENT, || {
            format!("{intent}: only {n} utterances")
        })?;
    }
    let report = evaluate_corpus(&Config::bundled().nlu(&load_plan(DEMO_PLAN).unwrap()), &entries);
    ensure(report.accuracy() >= CORPUS_ACCURACY, || report.to_string())?;
    ensure(report.literal_correct == report.literal_total, || {
        report.to_string()
    })?;
    Ok(format!(
        "{}/{} overall ({:.1}%), literal {}/{}",
        report.correct,
        report.total,
        100.0 * report.accuracy(),
        report.literal_correct,
        report.literal_total
    ))
}

/// Predictions come from the store; arrivals are read off the simulator.
fn eta_oracle() -> Check {
    let plan = load_plan(DEMO_PLAN).unwrap();
    let scenario = no_script();
    let interval = scenario.tick_dt * f64::from(scenario.telemetry_every);
    let targets: Vec<Waypoint> = plan.objectives.iter().flat_map(|o| o.waypoints.clone()).collect();
    let mut sim = Simulator::new(plan.clone(), scenario).unwrap();
    let mut store = MissionStore::new(plan);
    let mut arrival: Vec<Option<f64>> = vec![None; targets.len()];
    // (sample t, predicted arrival, eta) per target
    let mut predictions: Vec<Vec<(f64, f64, f64)>> = vec![Vec::new(); targets.len()];
    while sim.can_step() {
        let records = sim.step();
        let sampled = records.iter().any(|r| matches!(r, StreamRecord::State(_)));
        for r in records {
            store.ingest(r).map_err(|e| e.to_string())?;
        }
        let pos = sim.position("auv1").unwrap();
        for (i, w) in targets.iter().enumerate() {
            if arrival[i].is_none() && pos.distance(w) < 1e-9 {
                arrival[i] = Some(sim.t());
            }
        }
        if !sampled {
            continue;
        }
        for (i, w) in targets.iter().enumerate() {
            if arrival[i].is_some() && arrival[i] < Some(store.now()) {
                continue;
            }
            if let Ok(Estimate::Seconds { secs, .. }) = store.eta_to("auv1", &Target::Point(*w)) {
                predictions[i].push((store.now(), store.now() + secs, secs));
            }
        }
    }
    let mut worst: f64 = 0.0;
    let mut samples = 0;
    for (i, preds) in predictions.iter().enumerate() {
        let actual = arrival[i].ok_or_else(|| format!("waypoint {i} never reached"))?;
        ensure(!preds.is_empty() && preds[0].0 == 0.0, || {
            format!("waypoint {i}: no estimate from mission start")
        })?;
        for pair in preds.windows(2) {
            ensure(pair[1].2 <= pair[0].2 + 1e-9, || {
                format!(
                    "waypoint {i}: eta rose from {} to {} at t={}",
                    pair[0].2, pair[1].2, pair[1].0
                )
            })?;
        }
        for &(t, predicted, _) in preds {
            let err = (predicted - actual).abs();
            worst = worst.max(err);
            samples += 1;
            ensure(err <= ETA_INTERVALS * interval, || {
                format!("waypoint {i} at t={t}: predicted {predicted}, actual {actual}")
            })?;
        }
    }
    Ok(format!(
        "{} targets, {samples} samples, max |pred-actual| {worst:.3} s <= {} s",
        targets.len(),
        ETA_INTERVALS * interval
    ))
}

fn point_to_segment(p: Waypoint, a: Waypoint, b: Waypoint) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let len2 = dx * dx + dy * dy;
    let u = (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0);
    p.distance(&Waypoint::new(a.x + u * dx, a.y + u * dy))
}

fn progress_oracle() -> Check {
    let mut rt = MissionRuntime::new(&Config::bundled(), load_plan(DEMO_PLAN).unwrap(), no_script()).unwrap();
    rt.advance_to(f64::INFINITY);
    let end = rt.store().mission_progress();
    ensure((end.pct - 100.0).abs() <= PROGRESS_TOL_PCT, || {
        format!("final progress {}", end.pct)
    })?;

    // detour: obstacle while on a leg; growth computed from the vehicle
    // position and the planned leg it is on
    let obstacle_t = 900.0;
    let plan = load_plan(DEMO_PLAN).unwrap();
    let scenario = Scenario::parse(&format!(
        r#"{{"seed":7,"script":[{{"t":{obstacle_t},"trigger":{{"type":"obstacle","vehicle":"auv1"}}}}]}}"#
    ))
    .unwrap();
    let mut rt = MissionRuntime::new(&Config::bundled(), plan.clone(), scenario).unwrap();
    rt.advance_to(obstacle_t - 1.0);
    let before = rt.store().mission_progress().total_m;
    let out = rt.step();
    ensure(rt.now() == obstacle_t, || format!("clock at {}", rt.now()))?;
    ensure(
        out.records
            .iter()
            .any(|r| matches!(r, StreamRecord::Event(e) if e.kind == EventType::ObjectiveChanged)),
        || "no replan at the obstacle".into(),
    )?;
    let after = rt.store().mission_progress().total_m;
    let anchor = rt.sim().position("auv1").unwrap();
    let mut path = vec![Waypoint::ORIGIN];
    path.extend(plan.objectives.iter().flat_map(|o| o.waypoints.clone()));
    let leg = path
        .windows(2)
        .find(|w| point_to_segment(anchor, w[0], w[1]) < 1e-6 && anchor.distance(&w[1]) > 1e-6)
        .ok_or("vehicle not on a planned leg")?;
    let l = anchor.distance(&leg[1]);
    let analytic = 2.0 * (l / 3.0).hypot(DETOUR_OFFSET_M) + l / 3.0 - l;
    let growth = after - before;
    ensure((growth - analytic).abs() <= DETOUR_TOL_M, || {
        format!("path grew {growth:.4} m, analytic {analytic:.4} m")
    })?;
    rt.advance_to(f64::INFINITY);
    let detoured_end = rt.store().mission_progress().pct;
    ensure((detoured_end - 100.0).abs() <= PROGRESS_TOL_PCT, || {
        format!("final progress with detour {detoured_end}")
    })?;
    Ok(format!(
        "end {:.3}% (detour run {detoured_end:.3}%), detour growth {growth:.4} m vs analytic {analytic:.4} m",
        end.pct
    ))
}

async fn mixed_initiative() -> Check {
    // pinned critical alert on an idle session's stream
    let server = Server::spawn(&["--speed", "50"]);
    let api = Api::new(&server.base);
    let (id, _) = api.open().await;
    let mut stream = api.stream(&id, None).await;
    let alert = stream
        .wait_for(Duration::from_secs(20), |e| {
            e.event == "chat" && e.data["kind"] == "alert" && e.data["severity"] == "critical"
        })
        .await
        .ok_or("no critical alert on the stream")?;
    let tick = Scenario::parse(DEMO_SCENARIO).unwrap().tick_dt;
    let t = alert.data["t"].as_f64().unwrap();
    ensure(alert.data["pinned"] == true, || {
        format!("alert not pinned: {}", alert.data)
    })?;
    ensure((FAULT_AT..=FAULT_AT + tick).contains(&t), || {
        format!("alert at t={t}")
    })?;
    let alert_id = alert.data["alert_id"].as_u64().unwrap();
    stream
        .wait_for(Duration::from_secs(5), |e| {
            e.event == "track"
                && e.data["pinned"]
                    .as_array()
                    .is_some_and(|p| p.contains(&alert_id.into()))
        })
        .await
        .ok_or("pinned id missing from track updates")?;
    let ack = api.say(&id, "acknowledge").await;
    let cleared = stream
        .wait_for(Duration::from_secs(5), |e| {
            e.event == "track" && e.data["pinned"].as_array().is_some_and(|p| p.is_empty())
        })
        .await;
    ensure(cleared.is_some(), || {
        format!("pinned set not emptied after {ack}")
    })?;

    // throttling of a repeated warning
    let mut rt = runtime(r#"{"seed":7}"#);
    rt.open_session("op");
    let warning = |t| {
        StreamRecord::Event(MissionEvent::new(
            t,
            "auv1",
            EventType::BatteryWarning,
            "battery",
            "30%",
        ))
    };
    let first = rt.ingest(&[warning(10.0)]);
    let second = rt.ingest(&[warning(10.0 + THROTTLE_GAP_S)]);
    let alerts = first
        .iter()
        .chain(&second)
        .filter(|m| m.message.kind == MessageKind::Alert)
        .count();
    ensure(alerts == 1, || {
        format!("{alerts} alerts for two warnings {THROTTLE_GAP_S} s apart")
    })?;
    Ok(format!(
        "critical alert #{alert_id} pinned at t={t} (fault t={FAULT_AT}), ack emptied pins, 2 warnings -> {alerts} alert"
    ))
}

fn reminder_semantics() -> Check {
    let mut rt = runtime(DEMO_SCENARIO);
    rt.open_session("op");
    rt.advance_to(100.0);
    let asked_at = rt.now();
    let tick = rt.sim().scenario().tick_dt;
    rt.handle_turn("op", "remind me in 5 minutes").unwrap();
    rt.handle_turn("op", "remind me when Survey0 is complete")
        .unwrap();
    let out = rt.advance_to(f64::INFINITY);
    let reminders: Vec<f64> = out
        .messages
        .iter()
        .filter(|m| m.message.kind == MessageKind::Reminder)
        .map(|m| m.message.t)
        .collect();
    let completed: Vec<f64> = rt
        .store()
        .events()
        .iter()
        .filter(|e| e.kind == EventType::ObjectiveCompleted && e.subject == "Survey0")
        .map(|e| e.t)
        .collect();
    ensure(completed.len() == 1, || {
        format!("Survey0 completed {} times", completed.len())
    })?;
    ensure(reminders.len() == 2, || {
        format!("{} reminders fired: {reminders:?}", reminders.len())
    })?;
    let due = asked_at + REMINDER_DELAY_S;
    let timed = reminders.iter().copied().find(|t| (t - due).abs() <= tick);
    ensure(timed.is_some(), || {
        format!("no reminder within a tick of t={due}: {reminders:?}")
    })?;
    let on_event = reminders.iter().filter(|t| **t == completed[0]).count();
    ensure(on_event == 1, || {
        format!("completion reminder fired {on_event} times at t={}", completed[0])
    })?;
    Ok(format!(
        "timed reminder at t={} (due {due}), completion reminder once at t={}",
        timed.unwrap(),
        completed[0]
    ))
}

fn sim_run(out: &std::path::Path) -> Result<Vec<u8>, String> {
    let status = Command::new(env!("CARGO_BIN_EXE_sim"))
        .arg("run")
        .arg("--plan")
        .arg(data("demo_plan.json"))
        .arg("--scenario")
        .arg(data("demo_scenario.json"))
        .arg("--out")
        .arg(out)
        .stderr(Stdio::null())
        .status()
        .map_err(|e| e.to_string())?;
    ensure(status.success(), || format!("sim run exited {status}"))?;
    std::fs::read(out).map_err(|e| e.to_string())
}

async fn determinism() -> Check {
    let dir = std::env::temp_dir().join(format!("miriam-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let a = sim_run(&dir.join("a.ndjson"))?;
    let b = sim_run(&dir.join("b.ndjson"))?;
    let _ = std::fs::remove_dir_all(&dir);
    ensure(!a.is_empty() && a == b, || "sim run outputs differ".into())?;
    let lines = a.iter().filter(|b| **b == b'\n').count();

    // full scenario through the HTTP surface
    let started = Instant::now();
    let server = Server::spawn(&["--speed", "2000"]);
    let api = Api::new(&server.base);
    let (id, _) = api.open().await;
    let mut stream = api.stream(&id, None).await;
    let mut kinds: HashMap<String, usize> = HashMap::new();
    let mut acked = 0;
    api.say(&id, "where is Survey0").await;
    loop {
        let ev = tokio::time::timeout(E2E_BUDGET, stream.next())
            .await
            .map_err(|_| "stream stalled")?
            .ok_or("stream ended")?;
        *kinds.entry(ev.event.clone()).or_default() += 1;
        if ev.event == "chat" && ev.data["severity"] == "critical" {
            acked += 1;
            api.say(&id, "acknowledge").await;
        }
        if ev.event == "chat"
            && ev.data["kind"] == "alert"
            && ev.data["text"].as_str().unwrap_or("").contains("demo-harbour")
        {
            break;
        }
        ensure(started.elapsed() < E2E_BUDGET, || {
            "end-to-end run over budget".into()
        })?;
    }
    let progress = api.get("/api/mission/progress").await;
    let elapsed = started.elapsed();
    ensure(
        progress["finished"] == true || progress["completed"] == progress["total"],
        || format!("mission not complete: {progress}"),
    )?;
    ensure(elapsed < E2E_BUDGET, || format!("end-to-end took {elapsed:?}"))?;
    ensure(acked >= 1, || "no critical alert seen during the scenario".into())?;
    Ok(format!(
        "two sim runs byte-identical ({} bytes, {lines} records); serve+HTTP scenario to completion in {elapsed:.2?} ({} chat, {} track events)",
        a.len(),
        kinds.get("chat").unwrap_or(&0),
        kinds.get("track").unwrap_or(&0)
    ))
}

const PARITY_SCRIPT: [&str; 10] = [
    "status of auv1",
    "Where is Survey0?",
    "What time did it finish?",
    "What about Survey1?",
    "when will auv1 reach Survey1",
    "how far along is the mission",
    "what has auv1 done so far",
    "any faults on auv1",
    "remind me in 10 minutes",
    "what is the plan",
];

fn repl_replies() -> Result<Vec<String>, String> {
    let mut child = Command::new(env!("CARGO_BIN_EXE_miriam"))
        .args(["repl", "--start-at", PARITY_START_AT])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .map_err(|e| e.to_string())?;
    {
        let mut stdin = child.stdin.take().unwrap();
        for line in PARITY_SCRIPT {
            writeln!(stdin, "{line}").map_err(|e| e.to_string())?;
        }
        writeln!(stdin, "/quit").map_err(|e| e.to_string())?;
    }
    let out = child.wait_with_output().map_err(|e| e.to_string())?;
    ensure(out.status.success(), || format!("repl exited {}", out.status))?;
    Ok(String::from_utf8_lossy(&out.stdout)
        .lines()
        .filter_map(|l| l.strip_prefix(miriam::repl::REPLY_PREFIX))
        .map(str::to_string)
        .collect())
}

async fn repl_parity() -> Check {
    let repl = repl_replies()?;
    let server = Server::spawn(&["--speed", "0", "--start-at", PARITY_START_AT]);
    let api = Api::new(&server.base);
    let (id, greeting) = api.open().await;
    let mut http = vec![greeting["text"].as_str().unwrap().to_string()];
    for line in PARITY_SCRIPT {
        http.push(api.say(&id, line).await["text"].as_str().unwrap().to_string());
    }
    ensure(repl.len() == http.len(), || {
        format!("repl gave {} replies, http {}", repl.len(), http.len())
    })?;
    for (i, (r, h)) in repl.iter().zip(&http).enumerate() {
        ensure(r == h, || format!("turn {i}: repl {r:?} vs http {h:?}"))?;
    }
    Ok(format!("greeting + {} turns identical", PARITY_SCRIPT.len()))
}

#[tokio::test(flavor = "multi_thread", worker_threads = 2)]
async fn acceptance_criteria() {
    let results: Vec<(&str, Check)> = vec![
        ("paper dialogue", paper_dialogue()),
        ("dynamic lexicon", dynamic_lexicon()),
        ("intent corpus", intent_corpus()),
        ("eta oracle", eta_oracle()),
        ("progress oracle", progress_oracle()),
        ("mixed initiative", mixed_initiative().await),
        ("reminder semantics", reminder_semantics()),
        ("determinism", determinism().await),
        ("repl parity", repl_parity().await),
    ];
    let mut failed = Vec::new();
    for (name, result) in &results {
        match result {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                println!("FAIL {name}: {why}");
                failed.push(*name);
            }
        }
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}
