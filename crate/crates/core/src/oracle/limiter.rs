use std::sync::Mutex;
use std::thread;
use std::time::{Duration, Instant};

/// Spaces request starts at least `1 / rps` apart across all callers.
#[derive(Debug)]
pub struct RateLimiter {
    interval: Duration,
    next_free: Mutex<Option<Instant>>,
}

impl RateLimiter {
    /// # Panics
    /// If `requests_per_second` is not positive and finite.
    pub fn new(requests_per_second: f64) -> Self {
        assert!(
            requests_per_second.is_finite() && requests_per_second > 0.0,
            "rate must be positive"
        );
        RateLimiter {
            interval: Duration::from_nanos((1e9 / requests_per_second).ceil() as u64),
            next_free: Mutex::new(None),
        }
    }

    pub fn interval(&self) -> Duration {
        self.interval
    }

    /// Blocks until the caller's slot arrives. Waiters queue on the lock, so
    /// the next slot is measured from when the previous caller was released.
    pub fn acquire(&self) {
        let mut next = self.next_free.lock().unwrap();
        if let Some(t) = *next {
            let now = Instant::now();
            if t > now {
                thread::sleep(t - now);
            }
        }
        *next = Some(Instant::now() + self.interval);
    }
}
