#include "tth/predicate.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "tth/error.hpp"

namespace tth {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool any_atom(const Predicate& p, const auto& test) {
    return std::visit(
        overloaded{
            [&](const Predicate::And& a) {
                return std::any_of(a.terms.begin(), a.terms.end(), [&](const Predicate& q) { return any_atom(q, test); });
            },
            [&](const Predicate::Or& o) {
                return std::any_of(o.terms.begin(), o.terms.end(), [&](const Predicate& q) { return any_atom(q, test); });
            },
            [&](const Predicate::Not& n) { return any_atom(n.inner.front(), test); },
            [&](const auto& atom) { return test(atom); },
        },
        p.node());
}

void collect_aux(const Predicate& p, std::vector<std::string>& out) {
    std::visit(overloaded{
                   [&](const Predicate::And& a) {
                       for (const auto& q : a.terms) collect_aux(q, out);
                   },
                   [&](const Predicate::Or& o) {
                       for (const auto& q : o.terms) collect_aux(q, out);
                   },
                   [&](const Predicate::Not& n) { collect_aux(n.inner.front(), out); },
                   [&](const Predicate::AuxIn& a) { out.push_back(a.name); },
                   [&](const auto&) {},
               },
               p.node());
}

}  // namespace

std::string_view to_string(CmpOp op) noexcept {
    switch (op) {
        case CmpOp::eq: return "=";
        case CmpOp::ne: return "!=";
        case CmpOp::lt: return "<";
        case CmpOp::le: return "<=";
        case CmpOp::gt: return ">";
        case CmpOp::ge: return ">=";
    }
    return "?";
}

Predicate Predicate::docs_any(DocList docs) {
    std::sort(docs.begin(), docs.end());
    docs.erase(std::unique(docs.begin(), docs.end()), docs.end());
    return Predicate(DocsAny{std::move(docs)});
}

Predicate operator&&(Predicate a, Predicate b) { return Predicate(Predicate::And{{std::move(a), std::move(b)}}); }
Predicate operator||(Predicate a, Predicate b) { return Predicate(Predicate::Or{{std::move(a), std::move(b)}}); }
Predicate operator!(Predicate a) { return Predicate(Predicate::Not{{std::move(a)}}); }

bool Predicate::mentions_count() const {
    return any_atom(*this, overloaded{[](const CountCmp&) { return true; }, [](const ValueCmp&) { return true; },
                                      [](const auto&) { return false; }});
}

bool Predicate::mentions_value() const {
    return any_atom(*this, overloaded{[](const ValueCmp&) { return true; }, [](const auto&) { return false; }});
}

std::vector<std::string> Predicate::aux_names() const {
    std::vector<std::string> out;
    collect_aux(*this, out);
    return out;
}

// ---------------------------------------------------------------------------
// Compilation

struct CompiledPredicate::Impl {
    struct Node {
        enum class Kind { constant, all, any, negate, term_set, interval_cmp, interval_set, date_cmp, count_cmp,
                          docs_any, doc_range, aux_set };
        Kind kind = Kind::constant;
        bool constant = true;
        std::vector<Node> children;
        std::unordered_set<TermId> terms;
        std::set<Interval> intervals;
        CmpOp op = CmpOp::eq;
        std::int64_t number = 0;
        Date date;
        DocList docs;
        DocId lo = 0, hi = 0;
        std::size_t aux_pos = 0;
        std::set<std::string> aux_values;
    };
    Node root;
    TimeGrid grid;
};

CompiledPredicate::CompiledPredicate(const Predicate& predicate, const TTH& tth) {
    auto impl = std::make_shared<Impl>();
    impl->grid = tth.grid();
    using Node = Impl::Node;
    using K = Node::Kind;
    auto compile = [&](auto&& self, const Predicate& p) -> Node {
        Node n;
        std::visit(overloaded{
                       [&](const Predicate::Const& c) {
                           n.kind = K::constant;
                           n.constant = c.value;
                       },
                       [&](const Predicate::And& a) {
                           n.kind = K::all;
                           for (const auto& q : a.terms) n.children.push_back(self(self, q));
                       },
                       [&](const Predicate::Or& o) {
                           n.kind = K::any;
                           for (const auto& q : o.terms) n.children.push_back(self(self, q));
                       },
                       [&](const Predicate::Not& x) {
                           n.kind = K::negate;
                           n.children.push_back(self(self, x.inner.front()));
                       },
                       [&](const Predicate::TermIn& t) {
                           n.kind = K::term_set;
                           for (const auto& term : t.terms) {
                               if (auto id = tth.vocabulary()->find(term)) n.terms.insert(*id);
                           }
                       },
                       [&](const Predicate::IntervalCmp& c) {
                           n.kind = K::interval_cmp;
                           n.op = c.op;
                           n.number = c.value;
                       },
                       [&](const Predicate::IntervalIn& c) {
                           n.kind = K::interval_set;
                           n.intervals.insert(c.values.begin(), c.values.end());
                       },
                       [&](const Predicate::DateCmp& c) {
                           n.kind = K::date_cmp;
                           n.op = c.op;
                           n.date = c.value;
                       },
                       [&](const Predicate::CountCmp& c) {
                           n.kind = K::count_cmp;
                           n.op = c.op;
                           n.number = c.value;
                       },
                       [&](const Predicate::DocsAny& d) {
                           n.kind = K::docs_any;
                           n.docs = d.docs;
                       },
                       [&](const Predicate::DocRange& d) {
                           n.kind = K::doc_range;
                           n.lo = d.lo;
                           n.hi = d.hi;
                       },
                       [&](const Predicate::AuxIn& a) {
                           n.kind = K::aux_set;
                           n.aux_pos = tth.aux_position(a.name);
                           n.aux_values.insert(a.values.begin(), a.values.end());
                       },
                       [&](const Predicate::ValueCmp&) {
                           fail(ErrorKind::schema, "'value' atoms only apply to applyArg results");
                       },
                   },
                   p.node());
        return n;
    };
    impl->root = compile(compile, predicate);
    impl_ = std::move(impl);
}

bool CompiledPredicate::operator()(const TTHRow& row) const {
    using Node = Impl::Node;
    using K = Node::Kind;
    const TimeGrid& grid = impl_->grid;
    auto eval = [&](auto&& self, const Node& n) -> bool {
        switch (n.kind) {
            case K::constant: return n.constant;
            case K::all:
                for (const auto& c : n.children) {
                    if (!self(self, c)) return false;
                }
                return true;
            case K::any:
                for (const auto& c : n.children) {
                    if (self(self, c)) return true;
                }
                return false;
            case K::negate: return !self(self, n.children.front());
            case K::term_set: return n.terms.contains(row.term);
            case K::interval_cmp: return compare(n.op, row.interval, n.number);
            case K::interval_set: return n.intervals.contains(row.interval);
            case K::date_cmp: return compare(n.op, grid.interval_start(row.interval), n.date);
            case K::count_cmp: return compare(n.op, row.count, n.number);
            case K::docs_any: {
                auto a = row.docs.begin();
                auto b = n.docs.begin();
                while (a != row.docs.end() && b != n.docs.end()) {
                    if (*a == *b) return true;
                    if (*a < *b) ++a; else ++b;
                }
                return false;
            }
            case K::doc_range: {
                auto it = std::lower_bound(row.docs.begin(), row.docs.end(), n.lo);
                return it != row.docs.end() && *it <= n.hi;
            }
            case K::aux_set: return n.aux_values.contains(row.aux[n.aux_pos]);
        }
        return false;
    };
    return eval(eval, impl_->root);
}

// ---------------------------------------------------------------------------
// Text form

std::string to_text(const Predicate& predicate) {
    auto join = [](std::string head, const std::vector<std::string>& parts) {
        for (const auto& p : parts) head += " " + p;
        return "(" + head + ")";
    };
    return std::visit(
        overloaded{
            [](const Predicate::Const& c) { return std::string(c.value ? "(true)" : "(false)"); },
            [&](const Predicate::And& a) {
                std::vector<std::string> parts;
                for (const auto& q : a.terms) parts.push_back(to_text(q));
                return join("and", parts);
            },
            [&](const Predicate::Or& o) {
                std::vector<std::string> parts;
                for (const auto& q : o.terms) parts.push_back(to_text(q));
                return join("or", parts);
            },
            [&](const Predicate::Not& n) { return "(not " + to_text(n.inner.front()) + ")"; },
            [&](const Predicate::TermIn& t) {
                std::vector<std::string> parts{"term"};
                for (const auto& s : t.terms) parts.push_back(quote(s));
                return join(t.terms.size() == 1 ? "=" : "in", parts);
            },
            [&](const Predicate::IntervalCmp& c) {
                return "(" + std::string(to_string(c.op)) + " ts " + std::to_string(c.value) + ")";
            },
            [&](const Predicate::IntervalIn& c) {
                std::vector<std::string> parts{"ts"};
                for (auto v : c.values) parts.push_back(std::to_string(v));
                return join("in", parts);
            },
            [&](const Predicate::DateCmp& c) {
                return "(" + std::string(to_string(c.op)) + " date " + quote(format_date(c.value)) + ")";
            },
            [&](const Predicate::CountCmp& c) {
                return "(" + std::string(to_string(c.op)) + " count " + std::to_string(c.value) + ")";
            },
            [&](const Predicate::DocsAny& d) {
                std::vector<std::string> parts;
                for (auto v : d.docs) parts.push_back(std::to_string(v));
                return join("docs", parts);
            },
            [&](const Predicate::DocRange& d) {
                return "(doc-range " + std::to_string(d.lo) + " " + std::to_string(d.hi) + ")";
            },
            [&](const Predicate::AuxIn& a) {
                std::vector<std::string> parts{a.name};
                for (const auto& s : a.values) parts.push_back(quote(s));
                return join(a.values.size() == 1 ? "=" : "in", parts);
            },
            [&](const Predicate::ValueCmp& c) {
                return "(" + std::string(to_string(c.op)) + " value " + format_number(c.value) + ")";
            },
        },
        predicate.node());
}

namespace {

std::optional<CmpOp> cmp_op(std::string_view s) {
    if (s == "=") return CmpOp::eq;
    if (s == "!=") return CmpOp::ne;
    if (s == "<") return CmpOp::lt;
    if (s == "<=") return CmpOp::le;
    if (s == ">") return CmpOp::gt;
    if (s == ">=") return CmpOp::ge;
    return std::nullopt;
}

std::string string_arg(const SExpr& e) {
    if (e.kind == SExpr::Kind::string || e.kind == SExpr::Kind::symbol) return e.text;
    if (e.is_number()) return e.text;
    syntax_error(e, "expected a string");
}

std::int64_t int_arg(const SExpr& e) {
    if (e.kind != SExpr::Kind::integer) syntax_error(e, "expected an integer");
    return e.integer;
}

}  // namespace

Predicate predicate_from_sexpr(const SExpr& e) {
    if (!e.is_list() || e.items.empty() || e.items[0].kind != SExpr::Kind::symbol) {
        syntax_error(e, "expected a predicate form like (= term \"A\")");
    }
    const std::string& head = e.items[0].text;
    const auto& items = e.items;
    auto arity = [&](std::size_t n) {
        if (items.size() != n) syntax_error(e, "'" + head + "' expects " + std::to_string(n - 1) + " argument(s)");
    };
    if (head == "true" || head == "false") {
        arity(1);
        return Predicate(Predicate::Const{head == "true"});
    }
    if (head == "and" || head == "or") {
        std::vector<Predicate> terms;
        for (std::size_t i = 1; i < items.size(); ++i) terms.push_back(predicate_from_sexpr(items[i]));
        if (head == "and") return Predicate(Predicate::And{std::move(terms)});
        return Predicate(Predicate::Or{std::move(terms)});
    }
    if (head == "not") {
        arity(2);
        return !predicate_from_sexpr(items[1]);
    }
    if (head == "docs") {
        DocList docs;
        for (std::size_t i = 1; i < items.size(); ++i) docs.push_back(int_arg(items[i]));
        return Predicate::docs_any(std::move(docs));
    }
    if (head == "doc-range") {
        arity(3);
        return Predicate::doc_range(int_arg(items[1]), int_arg(items[2]));
    }
    if (items.size() < 2 || items[1].kind != SExpr::Kind::symbol) {
        syntax_error(e, "'" + head + "' expects an attribute name");
    }
    const std::string& attr = items[1].text;
    if (head == "in") {
        if (attr == "term") {
            std::vector<std::string> terms;
            for (std::size_t i = 2; i < items.size(); ++i) terms.push_back(string_arg(items[i]));
            return Predicate::term_in(std::move(terms));
        }
        if (attr == "ts") {
            std::vector<Interval> values;
            for (std::size_t i = 2; i < items.size(); ++i) values.push_back(int_arg(items[i]));
            return Predicate::interval_in(std::move(values));
        }
        if (attr == "count" || attr == "date" || attr == "value") {
            syntax_error(e, "'in' is not supported for '" + attr + "'");
        }
        std::vector<std::string> values;
        for (std::size_t i = 2; i < items.size(); ++i) values.push_back(string_arg(items[i]));
        return Predicate::aux_in(attr, std::move(values));
    }
    auto op = cmp_op(head);
    if (!op) {
        syntax_error(e, "unknown predicate operator '" + head + "'");
    }
    arity(3);
    const SExpr& arg = items[2];
    if (attr == "term" || (attr != "ts" && attr != "date" && attr != "count" && attr != "value")) {
        if (*op != CmpOp::eq && *op != CmpOp::ne) {
            syntax_error(e, "'" + attr + "' supports only = and !=");
        }
        Predicate p = attr == "term" ? Predicate::term_is(string_arg(arg)) : Predicate::aux_is(attr, string_arg(arg));
        return *op == CmpOp::eq ? p : !p;
    }
    if (attr == "ts") return Predicate::interval(*op, int_arg(arg));
    if (attr == "count") return Predicate::count(*op, int_arg(arg));
    if (attr == "date") {
        try {
            return Predicate::date(*op, parse_iso_date(string_arg(arg)));
        } catch (const Error&) {
            syntax_error(arg, "expected an ISO date");
        }
    }
    if (!arg.is_number()) syntax_error(arg, "expected a number");
    return Predicate::value(*op, arg.number());
}

Predicate parse_predicate(std::string_view text) { return predicate_from_sexpr(parse_sexpr(text)); }

}  // namespace tth
