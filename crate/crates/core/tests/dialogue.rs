use miriam_core::config::{Config, DEMO_PLAN, DEMO_SCENARIO};
use miriam_core::dialogue::MessageKind;
use miriam_core::mission::load_plan;
use miriam_core::nlu::{IntentLabel, SlotSource};
use miriam_core::runtime::MissionRuntime;
use miriam_core::sim::Scenario;

fn runtime(scenario: &str) -> MissionRuntime {
    MissionRuntime::new(
        &Config::bundled(),
        load_plan(DEMO_PLAN).unwrap(),
        Scenario::parse(scenario).unwrap(),
    )
    .unwrap()
}

fn ask(rt: &mut MissionRuntime, text: &str) -> String {
    rt.handle_turn("s", text).unwrap().reply.text
}

#[test]
fn three_turn_dialogue_from_the_demo() {
    let mut rt = runtime(DEMO_SCENARIO);
    rt.open_session("s");
    rt.advance_to(100.0);
    let a = rt.handle_turn("s", "Where is Survey0?").unwrap();
    let b = rt.handle_turn("s", "What time did it finish?").unwrap();
    let c = rt.handle_turn("s", "What about Survey1?").unwrap();
    assert_eq!(a.frame.intent, IntentLabel::ObjectiveLocation);
    assert_eq!(
        a.frame
            .slot_of_type(miriam_core::nlu::SlotType::Objective)
            .unwrap()
            .value,
        "Survey0"
    );
    assert_eq!(b.frame.intent, IntentLabel::ObjectiveFinishTime);
    let s = b.frame.slot("obj").unwrap();
    assert_eq!((s.value.as_str(), s.source), ("Survey0", SlotSource::Anaphora));
    assert_eq!(c.frame.intent, IntentLabel::ObjectiveLocation);
    let s = c.frame.slot("obj").unwrap();
    assert_eq!((s.value.as_str(), s.source), ("Survey1", SlotSource::Ellipsis));
    assert_eq!(b.reply.text, "Survey0 has not finished yet. It is in progress.");
}

#[test]
fn status_reply_carries_battery_and_objective() {
    let mut rt = runtime(DEMO_SCENARIO);
    rt.open_session("s");
    rt.advance_to(100.0);
    // 100 - 0.03 * 100
    assert_eq!(
        ask(&mut rt, "status of auv1"),
        "auv1 is nominal, battery 97%, working on Survey0."
    );
    assert_eq!(
        ask(&mut rt, "progress"),
        "The mission is 8% complete, 0 of 2 objectives done."
    );
}

#[test]
fn pronoun_resolves_to_objective_named_in_reply() {
    let mut rt = runtime(DEMO_SCENARIO);
    rt.open_session("s");
    rt.advance_to(50.0);
    ask(&mut rt, "what is auv1 doing");
    // the reply mentioned Survey0 after auv1, so "it" in an objective slot is Survey0
    let turn = rt.handle_turn("s", "when will it be complete").unwrap();
    assert_eq!(turn.frame.intent, IntentLabel::EtcObjective);
    assert_eq!(turn.frame.slot("obj").unwrap().value, "Survey0");
}

#[test]
fn preferences_change_rendering_for_that_session_only() {
    let mut rt = runtime(r#"{"seed":1}"#);
    rt.open_session("s");
    rt.open_session("t");
    rt.advance_to(100.0);
    ask(&mut rt, "use 12 hour time");
    ask(&mut rt, "show speeds in knots");
    let s = ask(&mut rt, "when will Survey0 be complete");
    assert!(
        s.contains("12:") && s.contains("AM") && s.contains("nmi") && s.contains("kn"),
        "{s}"
    );
    let t = rt
        .handle_turn("t", "when will Survey0 be complete")
        .unwrap()
        .reply
        .text;
    assert!(t.contains("00:") && t.contains("m/s"), "{t}");
}

#[test]
fn unknown_and_empty_inputs_get_guidance() {
    let mut rt = runtime(DEMO_SCENARIO);
    rt.open_session("s");
    let turn = rt.handle_turn("s", "xyzzy plugh").unwrap();
    assert_eq!(turn.frame.intent, IntentLabel::Unknown);
    assert!(turn.reply.text.contains("help"));
    let turn = rt.handle_turn("s", "   ").unwrap();
    assert_eq!(turn.reply.kind, MessageKind::Clarification);
    assert!(rt.handle_turn("missing", "status").is_none());
}

#[test]
fn fault_alert_reaches_idle_session_and_acknowledge_clears_it() {
    let mut rt = runtime(DEMO_SCENARIO);
    rt.open_session("s");
    let out = rt.advance_to(200.0);
    let alert = out
        .messages
        .iter()
        .find(|m| m.message.kind == MessageKind::Alert && m.message.pinned)
        .expect("pinned alert by t=200");
    assert_eq!(alert.message.t, 200.0);
    assert_eq!(rt.pinned("s").len(), 1);
    let reply = ask(&mut rt, "acknowledge");
    assert!(reply.starts_with("Acknowledged"), "{reply}");
    assert!(rt.pinned("s").is_empty());
    assert!(ask(&mut rt, "any faults").contains("acknowledged"));
    assert_eq!(
        ask(&mut rt, "acknowledge"),
        "There are no pinned alerts to acknowledge."
    );
}

#[test]
fn critical_only_session_sees_no_info_alerts() {
    let mut rt = runtime(DEMO_SCENARIO);
    rt.open_session("s");
    ask(&mut rt, "only show critical alerts");
    let out = rt.advance_to(1000.0);
    assert!(out
        .messages
        .iter()
        .all(|m| m.message.severity.is_none_or(|s| s.to_string() == "critical")));
    assert_eq!(out.messages.len(), 1);
}

#[test]
fn reminders_fire_on_time_and_on_completion() {
    let mut rt = runtime(DEMO_SCENARIO);
    rt.open_session("s");
    rt.advance_to(100.0);
    ask(&mut rt, "remind me in 5 minutes");
    ask(&mut rt, "remind me when Survey0 is complete");
    let out = rt.advance_to(100_000.0);
    let reminders: Vec<_> = out
        .messages
        .iter()
        .filter(|m| m.message.kind == MessageKind::Reminder)
        .collect();
    assert_eq!(reminders.len(), 2);
    assert_eq!(reminders[0].message.t, 400.0);
    let done = rt
        .store()
        .objective_status("Survey0")
        .unwrap()
        .finished_t
        .unwrap();
    assert_eq!(reminders[1].message.t, done);
    let reply = ask(&mut rt, "remind me when Survey0 is complete");
    assert!(reply.contains("already finished"), "{reply}");
}

#[test]
fn detected_target_becomes_askable() {
    let mut rt = runtime(DEMO_SCENARIO);
    rt.open_session("s");
    rt.advance_to(1600.0);
    let turn = rt.handle_turn("s", "where is Inspect1").unwrap();
    assert_eq!(turn.frame.intent, IntentLabel::ObjectiveLocation);
    assert!(turn.reply.text.contains("(150, 520)"), "{}", turn.reply.text);
}
