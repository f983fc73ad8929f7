//! Terminal chat against an in-process mission.
//!
//! Output lines are prefixed by kind so scripts can pick them apart:
//! `miriam> ` replies, `!! ` alerts, `** ` reminders, `-- ` REPL notices.

use std::io::{self, BufRead, Write};
use std::sync::{Arc, Mutex};
use std::thread;
use std::time::Duration;

use miriam_core::dialogue::{ChatMessage, MessageKind};
use miriam_core::runtime::{MissionRuntime, Outgoing};

pub const SESSION: &str = "operator";
pub const REPLY_PREFIX: &str = "miriam> ";

const HELP: &str = "-- commands: /advance SECONDS, /time, /pinned, /help, /quit";

#[derive(Debug, Clone, Default)]
pub struct ReplOptions {
    /// Simulated seconds per wall-clock second. `None` leaves the clock to
    /// `/advance`.
    pub speed: Option<f64>,
    pub prompt: bool,
}

pub fn render(m: &ChatMessage) -> String {
    match m.kind {
        MessageKind::Reply | MessageKind::Clarification => format!("{REPLY_PREFIX}{}", m.text),
        MessageKind::Alert => {
            let severity = m.severity.map(|s| s.to_string()).unwrap_or_default();
            let pin = match (m.pinned, m.alert_id) {
                (true, Some(id)) => format!(" pinned #{id}"),
                _ => String::new(),
            };
            format!("!! [t={} {severity}{pin}] {}", m.t, m.text)
        }
        MessageKind::Reminder => format!("** [t={}] {}", m.t, m.text),
    }
}

type Shared<T> = Arc<Mutex<T>>;

fn print_all<W: Write>(out: &Shared<W>, messages: &[Outgoing]) -> io::Result<()> {
    let mut out = out.lock().unwrap();
    for m in messages {
        writeln!(out, "{}", render(&m.message))?;
    }
    out.flush()
}

fn spawn_clock<W: Write + Send + 'static>(rt: Shared<MissionRuntime>, out: Shared<W>, speed: f64) {
    let dt = rt.lock().unwrap().sim().scenario().tick_dt;
    let period = Duration::from_secs_f64(dt / speed);
    thread::spawn(move || loop {
        thread::sleep(period);
        let messages = {
            let mut rt = rt.lock().unwrap();
            if rt.is_finished() {
                return;
            }
            rt.step().messages
        };
        if print_all(&out, &messages).is_err() {
            return;
        }
    });
}

/// Reads operator lines until `/quit` or end of input.
pub fn run<R: BufRead, W: Write + Send + 'static>(
    runtime: MissionRuntime,
    input: R,
    output: W,
    opts: &ReplOptions,
) -> io::Result<()> {
    let rt = Arc::new(Mutex::new(runtime));
    let out = Arc::new(Mutex::new(output));
    {
        let greeting = rt.lock().unwrap().open_session(SESSION);
        let mut o = out.lock().unwrap();
        writeln!(o, "{}", render(&greeting))?;
        writeln!(o, "{HELP}")?;
    }
    if let Some(speed) = opts.speed.filter(|s| *s > 0.0) {
        spawn_clock(rt.clone(), out.clone(), speed);
    }
    let mut lines = input.lines();
    loop {
        if opts.prompt {
            let mut o = out.lock().unwrap();
            write!(o, "> ")?;
            o.flush()?;
        }
        let Some(line) = lines.next() else { break };
        let line = line?;
        let line = line.trim();
        if let Some(command) = line.strip_prefix('/') {
            let mut words = command.split_whitespace();
            match (words.next(), words.next()) {
                (Some("quit" | "exit"), _) => break,
                (Some("advance"), Some(n)) => match n.parse::<f64>() {
                    Ok(secs) if secs >= 0.0 => {
                        let (messages, now) = {
                            let mut rt = rt.lock().unwrap();
                            let target = rt.now() + secs;
                            let messages = rt.advance_to(target).messages;
                            (messages, rt.now())
                        };
                        print_all(&out, &messages)?;
                        writeln!(out.lock().unwrap(), "-- t={now}")?;
                    }
                    _ => writeln!(
                        out.lock().unwrap(),
                        "-- /advance needs a non-negative number of seconds"
                    )?,
                },
                (Some("time"), _) => {
                    let now = rt.lock().unwrap().now();
                    writeln!(out.lock().unwrap(), "-- t={now}")?;
                }
                (Some("pinned"), _) => {
                    let pinned = rt.lock().unwrap().pinned(SESSION);
                    let ids: Vec<String> = pinned.iter().map(u64::to_string).collect();
                    writeln!(out.lock().unwrap(), "-- pinned: [{}]", ids.join(", "))?;
                }
                (Some("help"), _) => writeln!(out.lock().unwrap(), "{HELP}")?,
                _ => writeln!(out.lock().unwrap(), "-- unknown command; /help lists them")?,
            }
            continue;
        }
        let reply = rt.lock().unwrap().handle_turn(SESSION, line).map(|t| t.reply);
        if let Some(reply) = reply {
            let mut o = out.lock().unwrap();
            writeln!(o, "{}", render(&reply))?;
            o.flush()?;
        }
    }
    let result = out.lock().unwrap().flush();
    result
}
