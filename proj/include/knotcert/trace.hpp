// Derivation traces and contradiction reporting shared by every module.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace knotcert {

// One node of a derivation. `rule` is a stable machine-readable rule name,
// `note` a human-readable summary, `premises` the ids of the trace nodes
// this step was derived from (empty for axioms and external facts).
struct TraceNode {
    std::string rule;
    std::string note;
    std::vector<int> premises;
};

class TraceArena {
public:
    int add(std::string rule, std::string note, std::vector<int> premises = {}) {
        nodes_.push_back(TraceNode{std::move(rule), std::move(note), std::move(premises)});
        return static_cast<int>(nodes_.size()) - 1;
    }

    const TraceNode& at(int id) const { return nodes_.at(static_cast<size_t>(id)); }
    size_t size() const { return nodes_.size(); }
    const std::vector<TraceNode>& nodes() const { return nodes_; }

    // Renders the derivation tree rooted at `id`, one node per line,
    // children indented below their conclusion.
    std::string explain(int id) const {
        std::string out;
        explain_rec(id, 0, out);
        return out;
    }

private:
    void explain_rec(int id, int depth, std::string& out) const {
        if (id < 0 || id >= static_cast<int>(nodes_.size())) return;
        const TraceNode& n = nodes_[static_cast<size_t>(id)];
        out.append(static_cast<size_t>(2 * depth), ' ');
        out += "t" + std::to_string(id) + " [" + n.rule + "] " + n.note + "\n";
        for (int p : n.premises) explain_rec(p, depth + 1, out);
    }

    std::vector<TraceNode> nodes_;
};

// Raised when two derived bounds on the same quantity are incompatible.
// Carries the trace ids of both offending derivations.
class ContradictionError : public std::runtime_error {
public:
    ContradictionError(std::string what, int lo_trace, int hi_trace)
        : std::runtime_error(std::move(what)), lo_trace_(lo_trace), hi_trace_(hi_trace) {}

    int lo_trace() const { return lo_trace_; }
    int hi_trace() const { return hi_trace_; }

private:
    int lo_trace_;
    int hi_trace_;
};

// Parse failures carry a byte offset into the input text.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string what, size_t position)
        : std::runtime_error(std::move(what)), position_(position) {}

    size_t position() const { return position_; }

private:
    size_t position_;
};

// Precondition failures of rule applications; the message names the
// missing condition.
class RuleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace knotcert
