use super::goal::Goal;
use super::state::State;

type Thunk = Box<dyn FnOnce() -> Stream + Send>;

/// Lazy stream of answer states, advanced one step at a time.
///
/// Disjunction alternates between its branches on every step, so a branch
/// that never produces an answer cannot starve its sibling.
pub struct Stream(Node);

enum Node {
    Empty,
    Unit(State),
    Lazy(Thunk),
    Mplus(Box<Stream>, Box<Stream>),
    Bind(Box<Stream>, Goal),
}

/// Outcome of a single step.
pub enum Step {
    Done,
    Yield(State, Stream),
    Pending(Stream),
}

impl Stream {
    pub fn empty() -> Self {
        Stream(Node::Empty)
    }

    pub fn unit(s: State) -> Self {
        Stream(Node::Unit(s))
    }

    pub fn from_option(s: Option<State>) -> Self {
        match s {
            Some(s) => Stream::unit(s),
            None => Stream::empty(),
        }
    }

    pub fn lazy<F>(f: F) -> Self
    where
        F: FnOnce() -> Stream + Send + 'static,
    {
        Stream(Node::Lazy(Box::new(f)))
    }

    pub fn mplus(a: Stream, b: Stream) -> Self {
        if a.is_empty() {
            b
        } else if b.is_empty() {
            a
        } else {
            Stream(Node::Mplus(Box::new(a), Box::new(b)))
        }
    }

    pub fn bind(s: Stream, g: Goal) -> Self {
        if s.is_empty() {
            s
        } else {
            Stream(Node::Bind(Box::new(s), g))
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self.0, Node::Empty)
    }

    pub fn step(mut self) -> Step {
        match std::mem::replace(&mut self.0, Node::Empty) {
            Node::Empty => Step::Done,
            Node::Unit(s) => Step::Yield(s, Stream::empty()),
            Node::Lazy(f) => Step::Pending(f()),
            Node::Mplus(a, b) => match a.step() {
                Step::Done => Step::Pending(*b),
                Step::Yield(s, rest) => Step::Yield(s, Stream::mplus(*b, rest)),
                Step::Pending(rest) => Step::Pending(Stream::mplus(*b, rest)),
            },
            Node::Bind(a, g) => match a.step() {
                Step::Done => Step::Done,
                Step::Yield(s, rest) => {
                    let head = g.apply(s);
                    Step::Pending(Stream::mplus(head, Stream::bind(rest, g)))
                }
                Step::Pending(rest) => Step::Pending(Stream::bind(rest, g)),
            },
        }
    }
}

impl Drop for Stream {
    // Unlinks nested streams iteratively; a long search can build deep trees.
    fn drop(&mut self) {
        let mut stack: Vec<Box<Stream>> = Vec::new();
        let push_children = |node: Node, stack: &mut Vec<Box<Stream>>| match node {
            Node::Mplus(a, b) => {
                stack.push(a);
                stack.push(b);
            }
            Node::Bind(a, _) => stack.push(a),
            _ => {}
        };
        push_children(std::mem::replace(&mut self.0, Node::Empty), &mut stack);
        while let Some(mut s) = stack.pop() {
            let node = std::mem::replace(&mut s.0, Node::Empty);
            push_children(node, &mut stack);
        }
    }
}
