#include <set>

#include "tth/error.hpp"
#include "tth/plan.hpp"

namespace tth {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const TTH& as_tth(const PlainValue& v) {
    if (const auto* t = std::get_if<TTH>(&v)) return *t;
    if (const auto* s = std::get_if<SortedTTH>(&v)) return s->tth;
    fail(ErrorKind::type, "expected a histogram, got " + std::string(to_string(kind_of(v))));
}

SortedTTH as_sorted(const PlainValue& v) {
    if (const auto* s = std::get_if<SortedTTH>(&v)) return *s;
    fail(ErrorKind::type, "expected a sorted histogram, got " + std::string(to_string(kind_of(v))));
}

template <typename T>
const T& as(const PlainValue& v) {
    if (const auto* x = std::get_if<T>(&v)) return *x;
    fail(ErrorKind::type, "unexpected " + std::string(to_string(kind_of(v))) + " input");
}

bool value_test(const Predicate& p, double value) {
    return std::visit(
        overloaded{
            [&](const Predicate::Const& c) { return c.value; },
            [&](const Predicate::And& a) {
                for (const auto& q : a.terms) {
                    if (!value_test(q, value)) return false;
                }
                return true;
            },
            [&](const Predicate::Or& o) {
                for (const auto& q : o.terms) {
                    if (value_test(q, value)) return true;
                }
                return false;
            },
            [&](const Predicate::Not& n) { return !value_test(n.inner.front(), value); },
            [&](const Predicate::ValueCmp& c) { return compare(c.op, value, c.value); },
            [&](const auto&) -> bool {
                fail(ErrorKind::schema, "applyArg results can only be filtered on 'value'");
            },
        },
        p.node());
}

SortedTTH select_sorted(const SortedTTH& in, const Predicate& p) {
    CompiledPredicate test(p, in.tth);
    const auto& rows = in.tth.rows();
    std::vector<std::size_t> remap(rows.size(), SIZE_MAX);
    std::vector<TTHRow> kept;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (test(rows[i])) {
            remap[i] = kept.size();
            kept.push_back(rows[i]);
        }
    }
    SortedTTH out{in.tth.with_rows(std::move(kept)), {}};
    for (auto i : in.order) {
        if (remap[i] != SIZE_MAX) out.order.push_back(remap[i]);
    }
    return out;
}

DocList docs_of(const PlainValue& v) {
    DocList out;
    if (const auto* m = std::get_if<Marginal1D>(&v)) {
        for (const auto& r : m->rows) out = union_docs(out, r.docs);
        return out;
    }
    for (const auto& r : as_tth(v).rows()) out = union_docs(out, r.docs);
    return out;
}

PlainValue apply_unary(const PlanExpr::Op& op, const PlainValue& in, const FunctionRegistry& registry) {
    return std::visit(
        overloaded{
            [&](const op::Select& s) -> PlainValue {
                if (const auto* args = std::get_if<ArgValues>(&in)) {
                    ArgValues out;
                    for (const auto& r : *args) {
                        if (value_test(s.predicate, r.value)) out.push_back(r);
                    }
                    return out;
                }
                if (const auto* sorted = std::get_if<SortedTTH>(&in)) return select_sorted(*sorted, s.predicate);
                return select(as_tth(in), s.predicate);
            },
            [&](const op::Project& p) -> PlainValue {
                if (const auto* sorted = std::get_if<SortedTTH>(&in)) {
                    return project(sorted->tth, sorted->order, p.attrs, p.distinct);
                }
                return project(as_tth(in), p.attrs, p.distinct);
            },
            [&](const op::Coarsen& c) -> PlainValue { return coarsen(as_tth(in), c.width, c.start, c.end); },
            [&](const op::Apply& a) -> PlainValue { return registry.apply(as_tth(in), a.fn); },
            [&](const op::ApplyArg& a) -> PlainValue { return registry.apply_arg(as_tth(in), a.fn); },
            [&](const op::Sort& s) -> PlainValue { return sort_by_axis(as_tth(in), s.axis, s.order); },
            [&](const op::Top& t) -> PlainValue {
                return t.distinct ? top_distinct(as_sorted(in), t.k, *t.distinct) : top(as_sorted(in), t.k);
            },
            [&](const op::Collapse& c) -> PlainValue { return collapse(as_tth(in), c.axis); },
            [&](const op::ExtractAxis& x) -> PlainValue { return extract_axis(as_tth(in), x.axis); },
            [&](const op::DocsOf&) -> PlainValue { return docs_of(in); },
            [&](const auto&) -> PlainValue { fail(ErrorKind::type, "not a unary operator: " + op_name(op)); },
        },
        op);
}

PlainValue apply_binary(const PlanExpr::Op& op, const PlainValue& a, const PlainValue& b) {
    return std::visit(
        overloaded{
            [&](const op::Merge&) -> PlainValue { return merge(as_tth(a), as_tth(b)); },
            [&](const op::Distance& d) -> PlainValue { return distance(as_tth(a), as_tth(b), d.metric); },
            [&](const op::IndexOp& o) -> PlainValue { return index_op(o.kind, as<DocList>(a), as<DocList>(b)); },
            [&](const op::QueryIndex& q) -> PlainValue {
                return query_index(as_tth(a), as<DocList>(b), q.start, q.end);
            },
            [&](const op::GetRecords&) -> PlainValue {
                const TTH& tth = as_tth(a);
                std::set<RowKey> keys;
                for (const auto& r : as<ArgValues>(b)) keys.insert(r.keys.begin(), r.keys.end());
                std::vector<RowKey> list(keys.begin(), keys.end());
                return tth.with_rows(get_records(tth, list));
            },
            [&](const auto&) -> PlainValue { fail(ErrorKind::type, "not a binary operator: " + op_name(op)); },
        },
        op);
}

// Stand-in for a group missing on one side of a binary partitioned operation.
PlainValue missing_part(const Value& side, ValueKind kind) {
    switch (kind) {
        case ValueKind::tth: return *side.prototype;
        case ValueKind::sorted: return SortedTTH{*side.prototype, {}};
        case ValueKind::doc_list: return DocList{};
        case ValueKind::arg_values: return ArgValues{};
        default: fail(ErrorKind::type, "cannot pair partitions of kind " + std::string(to_string(kind)));
    }
}

std::size_t histogram_rows(const Value& v) {
    std::size_t n = 0;
    for (const auto& [key, part] : v.parts) {
        if (const auto* t = std::get_if<TTH>(&part)) n += t->size();
        else if (const auto* s = std::get_if<SortedTTH>(&part)) n += s->order.size();
    }
    return n;
}

void take_context(Value& out, const Value& from) {
    if (!out.vocabulary) out.vocabulary = from.vocabulary;
    if (!out.grid) out.grid = from.grid;
}

void set_context_from_parts(Value& out) {
    for (const auto& [key, part] : out.parts) {
        if (std::holds_alternative<TTH>(part) || std::holds_alternative<SortedTTH>(part)) {
            const TTH& t = as_tth(part);
            out.vocabulary = t.vocabulary();
            out.grid = t.grid();
            return;
        }
    }
    if (out.prototype) {
        out.vocabulary = out.prototype->vocabulary();
        out.grid = out.prototype->grid();
    }
}

class Evaluator {
public:
    Evaluator(const Environment& env, EvalStats* stats, const FunctionRegistry& registry)
        : env_(env), stats_(stats), registry_(registry) {}

    Value eval(const PlanExpr& e, const std::string& path) {
        std::vector<Value> in;
        for (std::size_t i = 0; i < e.inputs.size(); ++i) {
            in.push_back(eval(e.inputs[i], path + "/" + op_name(e.inputs[i].op) + "[" + std::to_string(i) + "]"));
        }
        Value out;
        try {
            out = compute(e, in);
        } catch (const Error& err) {
            throw Error(err.kind(), std::string(err.what()) + " [at " + path + "]");
        }
        if (stats_) {
            ++stats_->nodes_evaluated;
            if (!std::holds_alternative<op::Source>(e.op)) {
                stats_->max_intermediate_rows = std::max(stats_->max_intermediate_rows, histogram_rows(out));
            }
        }
        return out;
    }

private:
    Value compute(const PlanExpr& e, std::vector<Value>& in) {
        if (const auto* s = std::get_if<op::Source>(&e.op)) {
            auto it = env_.find(s->name);
            if (it == env_.end()) fail(ErrorKind::lookup, "unbound source '" + s->name + "'");
            Value v;
            v.parts.emplace_back(AuxValues{}, it->second);
            v.vocabulary = it->second.vocabulary();
            v.grid = it->second.grid();
            return v;
        }
        if (const auto* d = std::get_if<op::Docs>(&e.op)) {
            Value v;
            DocList list = d->docs;
            for (std::size_t i = 1; i < list.size(); ++i) {
                if (list[i - 1] >= list[i]) fail(ErrorKind::contract, "document list literal must ascend strictly");
            }
            v.parts.emplace_back(AuxValues{}, std::move(list));
            return v;
        }
        if (const auto* g = std::get_if<op::Group>(&e.op)) {
            const Value& src = in.at(0);
            if (src.partitioned()) fail(ErrorKind::type, "cannot group an already partitioned histogram");
            PartitionedTTH parts = group(as_tth(src.single()), g->vars);
            Value v;
            v.group_schema = parts.group_schema;
            for (auto& [key, part] : parts.parts) v.parts.emplace_back(key, std::move(part));
            v.prototype = parts.prototype;
            set_context_from_parts(v);
            return v;
        }
        if (std::holds_alternative<op::Merge>(e.op) && in.size() == 1) {
            const Value& src = in[0];
            if (!src.partitioned()) fail(ErrorKind::type, "unary merge needs a partitioned histogram");
            TTH acc = *src.prototype;
            for (const auto& [key, part] : src.parts) acc = merge(acc, as_tth(part));
            Value v;
            v.parts.emplace_back(AuxValues{}, std::move(acc));
            set_context_from_parts(v);
            return v;
        }
        if (in.size() == 1) return unary(e.op, in[0]);
        if (in.size() == 2) return binary(e.op, in[0], in[1]);
        fail(ErrorKind::type, op_name(e.op) + " has " + std::to_string(in.size()) + " inputs");
    }

    Value unary(const PlanExpr::Op& op, const Value& src) {
        Value v;
        v.group_schema = src.group_schema;
        for (const auto& [key, part] : src.parts) v.parts.emplace_back(key, apply_unary(op, part, registry_));
        if (src.prototype) {
            PlainValue proto = apply_unary(op, *src.prototype, registry_);
            if (const auto* t = std::get_if<TTH>(&proto)) v.prototype = *t;
            else if (const auto* s = std::get_if<SortedTTH>(&proto)) v.prototype = s->tth;
        }
        set_context_from_parts(v);
        take_context(v, src);
        return v;
    }

    Value binary(const PlanExpr::Op& op, const Value& a, const Value& b) {
        if (a.partitioned() != b.partitioned()) {
            fail(ErrorKind::type, op_name(op) + " mixes partitioned and unpartitioned inputs");
        }
        Value v;
        if (!a.partitioned()) {
            v.parts.emplace_back(AuxValues{}, apply_binary(op, a.single(), b.single()));
        } else {
            if (*a.group_schema != *b.group_schema) {
                fail(ErrorKind::schema, op_name(op) + " pairs partitions with different grouping variables");
            }
            v.group_schema = a.group_schema;
            std::map<AuxValues, std::pair<const PlainValue*, const PlainValue*>> paired;
            for (const auto& [key, part] : a.parts) paired[key].first = &part;
            for (const auto& [key, part] : b.parts) paired[key].second = &part;
            for (const auto& [key, pair] : paired) {
                PlainValue left = pair.first ? *pair.first : missing_part(a, kind_of(*pair.second));
                PlainValue right = pair.second ? *pair.second : missing_part(b, kind_of(*pair.first));
                v.parts.emplace_back(key, apply_binary(op, left, right));
            }
            if (a.prototype && b.prototype && std::holds_alternative<op::Merge>(op)) {
                v.prototype = merge(*a.prototype, *b.prototype);
            } else if (a.prototype && std::holds_alternative<op::GetRecords>(op)) {
                v.prototype = a.prototype->empty_like();
            }
        }
        set_context_from_parts(v);
        take_context(v, a);
        take_context(v, b);
        return v;
    }

    const Environment& env_;
    EvalStats* stats_;
    const FunctionRegistry& registry_;
};

std::string format_date_of(const std::optional<TimeGrid>& grid, Interval i) {
    return grid ? format_date(grid->interval_start(i)) : std::string();
}

std::string format_term(const std::shared_ptr<const Vocabulary>& vocab, TermId id) {
    return vocab && id < vocab->size() ? vocab->term_of(id) : "#" + std::to_string(id);
}

}  // namespace

ValueKind kind_of(const PlainValue& v) {
    return std::visit(overloaded{
                          [](const TTH&) { return ValueKind::tth; },
                          [](const SortedTTH&) { return ValueKind::sorted; },
                          [](const Marginal1D&) { return ValueKind::marginal; },
                          [](const std::vector<double>&) { return ValueKind::values; },
                          [](const ArgValues&) { return ValueKind::arg_values; },
                          [](const AxisValues&) { return ValueKind::axis; },
                          [](const Relation&) { return ValueKind::relation; },
                          [](const DocList&) { return ValueKind::doc_list; },
                          [](const KeySet&) { return ValueKind::key_set; },
                          [](const double&) { return ValueKind::scalar; },
                      },
                      v);
}

const PlainValue& Value::single() const {
    if (partitioned() || parts.size() != 1) {
        fail(ErrorKind::contract, "expected a single unpartitioned value");
    }
    return parts.front().second;
}

Catalog catalog_of(const Environment& env) {
    Catalog out;
    for (const auto& [name, tth] : env) out[name] = SourceInfo{tth.grid(), tth.aux_schema(), tth.size()};
    return out;
}

Value evaluate(const PlanExpr& e, const Environment& env, EvalStats* stats, const FunctionRegistry& registry) {
    return Evaluator(env, stats, registry).eval(e, "/" + op_name(e.op));
}

Relation to_relation(const Value& v) {
    Relation rel;
    bool columns_set = false;
    auto set_columns = [&](std::vector<std::string> cols) {
        if (columns_set) return;
        columns_set = true;
        if (v.group_schema) {
            for (auto it = v.group_schema->rbegin(); it != v.group_schema->rend(); ++it) {
                cols.insert(cols.begin(), "group:" + *it);
            }
        }
        rel.columns = std::move(cols);
    };
    for (const auto& [key, part] : v.parts) {
        auto emit = [&](std::vector<Cell> cells) {
            std::vector<Cell> row;
            for (const auto& k : key) row.emplace_back(k);
            for (auto& c : cells) row.push_back(std::move(c));
            rel.rows.push_back(std::move(row));
        };
        std::visit(
            overloaded{
                [&](const auto& hist)
                    requires std::is_same_v<std::decay_t<decltype(hist)>, TTH> ||
                             std::is_same_v<std::decay_t<decltype(hist)>, SortedTTH>
                {
                    const TTH* t;
                    std::vector<std::size_t> order;
                    if constexpr (std::is_same_v<std::decay_t<decltype(hist)>, TTH>) {
                        t = &hist;
                        for (std::size_t i = 0; i < hist.size(); ++i) order.push_back(i);
                    } else {
                        t = &hist.tth;
                        order = hist.order;
                    }
                    std::vector<std::string> cols{"term", "ts", "date", "count", "doc_ids"};
                    for (const auto& a : t->aux_schema()) cols.push_back(a);
                    set_columns(cols);
                    Relation r = project(*t, order, cols, false);
                    for (auto& row : r.rows) emit(std::move(row));
                },
                [&](const Marginal1D& m) {
                    if (m.axis == Axis::ts) set_columns({"ts", "date", "count", "doc_ids"});
                    else set_columns({"term", "count", "doc_ids"});
                    for (const auto& r : m.rows) {
                        if (m.axis == Axis::ts) {
                            emit({r.value, format_date_of(v.grid, r.value), r.count, r.docs});
                        } else {
                            emit({format_term(v.vocabulary, static_cast<TermId>(r.value)), r.count, r.docs});
                        }
                    }
                },
                [&](const std::vector<double>& values) {
                    set_columns({"value"});
                    for (double x : values) emit({format_number(x)});
                },
                [&](const ArgValues& args) {
                    set_columns({"value", "keys"});
                    for (const auto& r : args) {
                        std::string keys;
                        for (std::size_t i = 0; i < r.keys.size(); ++i) {
                            const RowKey& k = r.keys[i];
                            keys += (i ? ";" : "") + format_term(v.vocabulary, k.term) + "@" +
                                    format_date_of(v.grid, k.interval);
                            for (const auto& a : k.aux) keys += "/" + a;
                        }
                        emit({format_number(r.value), keys});
                    }
                },
                [&](const AxisValues& axis) {
                    if (axis.axis == Axis::ts) {
                        set_columns({"ts", "date"});
                        for (auto i : axis.intervals) emit({i, format_date_of(v.grid, i)});
                    } else {
                        set_columns({"term"});
                        for (const auto& t : axis.terms) emit({t});
                    }
                },
                [&](const Relation& r) {
                    set_columns(r.columns);
                    for (const auto& row : r.rows) emit(row);
                },
                [&](const DocList& docs) {
                    set_columns({"doc_id"});
                    for (auto d : docs) emit({d});
                },
                [&](const KeySet& keys) {
                    set_columns({"term", "ts", "date"});
                    for (const auto& [term, ts] : keys) {
                        emit({format_term(v.vocabulary, term), ts, format_date_of(v.grid, ts)});
                    }
                },
                [&](const double& x) {
                    set_columns({"value"});
                    emit({format_number(x)});
                },
            },
            part);
    }
    if (!columns_set) {
        if (v.prototype) {
            std::vector<std::string> cols{"term", "ts", "date", "count", "doc_ids"};
            for (const auto& a : v.prototype->aux_schema()) cols.push_back(a);
            set_columns(cols);
        } else {
            set_columns({});
        }
    }
    return rel;
}

}  // namespace tth
