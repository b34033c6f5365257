#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tth/sexpr.hpp"
#include "tth/tth.hpp"

namespace tth {

enum class CmpOp { eq, ne, lt, le, gt, ge };

std::string_view to_string(CmpOp op) noexcept;

template <typename T>
bool compare(CmpOp op, const T& lhs, const T& rhs) {
    switch (op) {
        case CmpOp::eq: return lhs == rhs;
        case CmpOp::ne: return lhs != rhs;
        case CmpOp::lt: return lhs < rhs;
        case CmpOp::le: return lhs <= rhs;
        case CmpOp::gt: return lhs > rhs;
        case CmpOp::ge: return lhs >= rhs;
    }
    return false;
}

/// Row predicate over term, interval/date, count, document membership and aux values.
///
/// Text form (s-expressions):
///   (true) (false) (and P...) (or P...) (not P)
///   (= term "A")  (in term "A" "B")  (!= term "A")
///   (<op> ts 3)   (in ts 1 2)        (<op> date "2017-06-01")   ; interval start date
///   (<op> count 3)
///   (docs 201 250)                   ; row mentions any of these documents
///   (doc-range 201 399)              ; row mentions a document in [lo, hi]
///   (= city "NY")  (in city "NY" "LA")                          ; any other name is aux
///   (<op> value 2.5)                 ; only on applyArg results
/// where <op> is one of = != < <= > >=.
class Predicate {
public:
    struct Const {
        bool value = true;
        bool operator==(const Const&) const = default;
    };
    struct And {
        std::vector<Predicate> terms;
        bool operator==(const And&) const = default;
    };
    struct Or {
        std::vector<Predicate> terms;
        bool operator==(const Or&) const = default;
    };
    struct Not {
        std::vector<Predicate> inner;  // exactly one element
        bool operator==(const Not&) const = default;
    };
    struct TermIn {
        std::vector<std::string> terms;
        bool operator==(const TermIn&) const = default;
    };
    struct IntervalCmp {
        CmpOp op = CmpOp::eq;
        Interval value = 0;
        bool operator==(const IntervalCmp&) const = default;
    };
    struct IntervalIn {
        std::vector<Interval> values;
        bool operator==(const IntervalIn&) const = default;
    };
    struct DateCmp {
        CmpOp op = CmpOp::eq;
        Date value;
        bool operator==(const DateCmp&) const = default;
    };
    struct CountCmp {
        CmpOp op = CmpOp::eq;
        Count value = 0;
        bool operator==(const CountCmp&) const = default;
    };
    struct DocsAny {
        DocList docs;
        bool operator==(const DocsAny&) const = default;
    };
    struct DocRange {
        DocId lo = 0;
        DocId hi = 0;
        bool operator==(const DocRange&) const = default;
    };
    struct AuxIn {
        std::string name;
        std::vector<std::string> values;
        bool operator==(const AuxIn&) const = default;
    };
    struct ValueCmp {
        CmpOp op = CmpOp::gt;
        double value = 0;
        bool operator==(const ValueCmp&) const = default;
    };

    using Node = std::variant<Const, And, Or, Not, TermIn, IntervalCmp, IntervalIn, DateCmp, CountCmp, DocsAny,
                              DocRange, AuxIn, ValueCmp>;

    Predicate() : node_(Const{true}) {}
    Predicate(Node node) : node_(std::move(node)) {}

    static Predicate always() { return Predicate(Const{true}); }
    static Predicate never() { return Predicate(Const{false}); }
    static Predicate term_is(std::string term) { return Predicate(TermIn{{std::move(term)}}); }
    static Predicate term_in(std::vector<std::string> terms) { return Predicate(TermIn{std::move(terms)}); }
    static Predicate interval(CmpOp op, Interval v) { return Predicate(IntervalCmp{op, v}); }
    static Predicate interval_in(std::vector<Interval> v) { return Predicate(IntervalIn{std::move(v)}); }
    static Predicate date(CmpOp op, Date d) { return Predicate(DateCmp{op, d}); }
    static Predicate count(CmpOp op, Count v) { return Predicate(CountCmp{op, v}); }
    static Predicate docs_any(DocList docs);
    static Predicate doc_range(DocId lo, DocId hi) { return Predicate(DocRange{lo, hi}); }
    static Predicate aux_is(std::string name, std::string value) {
        return Predicate(AuxIn{std::move(name), {std::move(value)}});
    }
    static Predicate aux_in(std::string name, std::vector<std::string> values) {
        return Predicate(AuxIn{std::move(name), std::move(values)});
    }
    static Predicate value(CmpOp op, double v) { return Predicate(ValueCmp{op, v}); }

    friend Predicate operator&&(Predicate a, Predicate b);
    friend Predicate operator||(Predicate a, Predicate b);
    friend Predicate operator!(Predicate a);

    const Node& node() const noexcept { return node_; }

    /// Whether any atom tests the count or value columns.
    bool mentions_count() const;
    /// Whether any atom tests an applyArg value (only valid on applyArg results).
    bool mentions_value() const;
    /// Aux attribute names referenced.
    std::vector<std::string> aux_names() const;

    bool operator==(const Predicate&) const = default;

private:
    Node node_;
};

/// A predicate resolved against one TTH's vocabulary and aux schema.
class CompiledPredicate {
public:
    /// Schema error for unknown aux attributes or value atoms.
    CompiledPredicate(const Predicate& predicate, const TTH& tth);
    bool operator()(const TTHRow& row) const;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

std::string to_text(const Predicate& predicate);
/// Syntax error on malformed text.
Predicate parse_predicate(std::string_view text);
Predicate predicate_from_sexpr(const SExpr& expr);

}  // namespace tth
