use std::sync::Mutex;
use std::time::Duration;

use super::transport::{Request, Response, Transport};
use crate::error::{Error, Result};

/// Retry schedule for rate limiting and dropped connections.
///
/// A `Retry-After` header wins over the exponential schedule. Delays never
/// decrease within one retry sequence and never exceed `max_delay`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RetryPolicy {
    pub initial_delay: Duration,
    pub factor: f64,
    pub max_delay: Duration,
    /// Total attempts per request, the first one included.
    pub max_attempts: u32,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy {
            initial_delay: Duration::from_secs(1),
            factor: 2.0,
            max_delay: Duration::from_secs(300),
            max_attempts: 7,
        }
    }
}

impl RetryPolicy {
    pub fn backoff(&self) -> Backoff {
        Backoff {
            policy: *self,
            failures: 0,
            last: Duration::ZERO,
        }
    }
}

/// State of one retry sequence.
#[derive(Debug, Clone)]
pub struct Backoff {
    policy: RetryPolicy,
    failures: u32,
    last: Duration,
}

impl Backoff {
    /// Records a failed attempt and returns how long to wait before the
    /// next one, or `None` once the attempt budget is spent.
    pub fn next_delay(&mut self, hint: Option<Duration>) -> Option<Duration> {
        self.failures += 1;
        if self.failures >= self.policy.max_attempts {
            return None;
        }
        let exp = self
            .policy
            .initial_delay
            .mul_f64(self.policy.factor.powi(self.failures as i32 - 1));
        let delay = hint.unwrap_or(exp).max(self.last).min(self.policy.max_delay);
        self.last = delay;
        Some(delay)
    }

    pub fn attempts(&self) -> u32 {
        self.failures
    }

    pub fn reset(&mut self) {
        self.failures = 0;
        self.last = Duration::ZERO;
    }
}

pub trait Sleeper {
    fn sleep(&self, d: Duration);
}

#[derive(Debug, Default, Clone, Copy)]
pub struct ThreadSleeper;

impl Sleeper for ThreadSleeper {
    fn sleep(&self, d: Duration) {
        std::thread::sleep(d);
    }
}

/// Records requested delays without sleeping.
#[derive(Debug, Default)]
pub struct RecordingSleeper {
    delays: Mutex<Vec<Duration>>,
}

impl RecordingSleeper {
    pub fn delays(&self) -> Vec<Duration> {
        self.delays.lock().unwrap().clone()
    }
}

impl Sleeper for RecordingSleeper {
    fn sleep(&self, d: Duration) {
        self.delays.lock().unwrap().push(d);
    }
}

/// Parses `Retry-After` in its delta-seconds form.
pub fn retry_after(resp: &Response) -> Option<Duration> {
    resp.header("retry-after")?
        .trim()
        .parse::<u64>()
        .ok()
        .map(Duration::from_secs)
}

/// Sends `req` until it yields a success status, mapping 401/403 to
/// [`Error::Auth`] and retrying 429, 5xx and connection failures per the
/// backoff.
pub(crate) fn send<T: Transport + ?Sized>(
    transport: &T,
    req: &Request<'_>,
    backoff: &mut Backoff,
    sleeper: &dyn Sleeper,
) -> Result<Response> {
    loop {
        let (hint, failure) = match transport.request(req) {
            Ok(resp) if resp.is_success() => return Ok(resp),
            Ok(resp) if matches!(resp.status, 401 | 403) => {
                return Err(Error::Auth {
                    status: resp.status,
                })
            }
            Ok(resp) if resp.status == 429 => (
                retry_after(&resp),
                Error::RateLimited {
                    attempts: backoff.attempts() + 1,
                },
            ),
            Ok(resp) if resp.status >= 500 => (
                retry_after(&resp),
                Error::Transport(format!("{} {} returned HTTP {}", req.method, req.url, resp.status)),
            ),
            Ok(resp) => {
                return Err(Error::Transport(format!(
                    "{} {} returned HTTP {}",
                    req.method, req.url, resp.status
                )))
            }
            Err(e @ Error::Transport(_)) => (None, e),
            Err(e) => return Err(e),
        };
        match backoff.next_delay(hint) {
            Some(delay) => {
                log::warn!("{failure}; retrying in {delay:?}");
                sleeper.sleep(delay);
            }
            None => return Err(failure),
        }
    }
}
