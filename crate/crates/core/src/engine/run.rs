use super::goal::Goal;
use super::reify::Reified;
use super::state::State;
use super::stream::{Step, Stream};
use super::term::Term;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunLimits {
    /// `None` pulls every answer.
    pub max_answers: Option<usize>,
    /// Stream steps available; `None` is unbounded.
    pub fuel: Option<u64>,
}

impl RunLimits {
    pub fn unbounded() -> Self {
        RunLimits {
            max_answers: None,
            fuel: None,
        }
    }

    pub fn answers(n: usize) -> Self {
        RunLimits {
            max_answers: Some(n),
            fuel: None,
        }
    }

    pub fn with_fuel(mut self, fuel: u64) -> Self {
        self.fuel = Some(fuel);
        self
    }
}

/// Why a run stopped pulling answers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exhaustion {
    StreamEnded,
    AnswerLimit,
    FuelExhausted,
}

#[derive(Clone, Debug)]
pub struct Answer {
    pub value: Reified,
    pub state: State,
}

#[derive(Clone, Debug)]
pub struct RunResult {
    pub answers: Vec<Answer>,
    pub exhaustion: Exhaustion,
    pub steps: u64,
    pub unifications: u64,
}

impl RunResult {
    pub fn values(&self) -> Vec<Reified> {
        self.answers.iter().map(|a| a.value.clone()).collect()
    }

    pub fn fuel_exhausted(&self) -> bool {
        self.exhaustion == Exhaustion::FuelExhausted
    }
}

/// Runs `query` on one fresh variable and reifies that variable in each
/// answer.
pub fn run<K>(limits: RunLimits, query: K) -> RunResult
where
    K: FnOnce(Term) -> Goal,
{
    let mut init = State::new();
    let q = init.fresh_var();
    let goal = query(q.clone());
    run_goal(limits, init, goal, &q)
}

pub fn run_goal(limits: RunLimits, init: State, goal: Goal, q: &Term) -> RunResult {
    let counters = init.counters().clone();
    let mut stream = goal.apply(init);
    let mut answers = Vec::new();
    let mut steps = 0u64;
    let exhaustion = loop {
        if limits.max_answers.is_some_and(|n| answers.len() >= n) {
            break Exhaustion::AnswerLimit;
        }
        if limits.fuel.is_some_and(|f| steps >= f) {
            break Exhaustion::FuelExhausted;
        }
        steps += 1;
        match stream.step() {
            Step::Done => break Exhaustion::StreamEnded,
            Step::Yield(s, rest) => {
                answers.push(Answer {
                    value: s.reify(q),
                    state: s,
                });
                stream = rest;
            }
            Step::Pending(rest) => stream = rest,
        }
    };
    RunResult {
        answers,
        exhaustion,
        steps,
        unifications: counters.unifications(),
    }
}

/// Pull-based iterator over answer states, for callers that want to drive
/// the search themselves.
pub struct Answers {
    stream: Option<Stream>,
    steps: u64,
}

impl Answers {
    pub fn new(goal: &Goal, init: State) -> Self {
        Answers {
            stream: Some(goal.apply(init)),
            steps: 0,
        }
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }
}

impl Iterator for Answers {
    type Item = State;

    fn next(&mut self) -> Option<State> {
        loop {
            let stream = self.stream.take()?;
            self.steps += 1;
            match stream.step() {
                Step::Done => return None,
                Step::Yield(s, rest) => {
                    self.stream = Some(rest);
                    return Some(s);
                }
                Step::Pending(rest) => self.stream = Some(rest),
            }
        }
    }
}
