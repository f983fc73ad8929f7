//! The mission clock and server lifecycle.

use std::net::SocketAddr;
use std::time::{Duration, Instant};

use tokio::net::TcpListener;

use crate::http::{router, AppState};
use crate::hub::{SharedHub, SESSION_TTL};

pub struct ServeOptions {
    pub addr: SocketAddr,
    /// Simulated seconds per wall-clock second; 0 holds the clock still.
    pub speed: f64,
    pub heartbeat: Duration,
}

/// Ticks the simulator at `tick_dt / speed` wall seconds per tick until the
/// mission ends. Runs behind on a slow machine rather than skipping ticks.
pub async fn run_clock(hub: SharedHub, speed: f64) {
    if speed.is_nan() || speed <= 0.0 {
        return;
    }
    let dt = hub.lock().unwrap().runtime().sim().scenario().tick_dt;
    let period = Duration::from_secs_f64(dt / speed);
    let mut interval = tokio::time::interval(period);
    interval.set_missed_tick_behavior(tokio::time::MissedTickBehavior::Delay);
    loop {
        interval.tick().await;
        if !hub.lock().unwrap().step() {
            tracing::info!("mission finished");
            return;
        }
    }
}

async fn expire_sessions(hub: SharedHub) {
    let mut interval = tokio::time::interval(Duration::from_secs(60));
    loop {
        interval.tick().await;
        let n = hub.lock().unwrap().expire_idle(Instant::now(), SESSION_TTL);
        if n > 0 {
            tracing::info!("expired {n} idle sessions");
        }
    }
}

/// Binds, reports the bound address through `on_bound`, and serves until
/// ctrl-c.
pub async fn serve(
    hub: SharedHub,
    opts: ServeOptions,
    on_bound: impl FnOnce(SocketAddr),
) -> anyhow::Result<()> {
    let listener = TcpListener::bind(opts.addr).await?;
    on_bound(listener.local_addr()?);
    tokio::spawn(run_clock(hub.clone(), opts.speed));
    tokio::spawn(expire_sessions(hub.clone()));
    let app = router(AppState {
        hub,
        heartbeat: opts.heartbeat,
    });
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}
