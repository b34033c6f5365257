#include <cctype>
#include <map>
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

bool plain_symbol(const std::string& s) {
    if (s.empty() || s.front() == ':') return false;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == '"' || c == ';') return false;
    }
    // Must not read back as a number.
    SExpr probe = parse_sexpr(s);
    return probe.kind == SExpr::Kind::symbol;
}

std::string atom(const std::string& s) { return plain_symbol(s) ? s : quote(s); }

std::string window_text(const std::optional<Date>& start, const std::optional<Date>& end) {
    std::string out;
    if (start) out += " :start " + quote(format_date(*start));
    if (end) out += " :end " + quote(format_date(*end));
    return out;
}

std::string fn_text(const FunctionCall& fn) {
    std::string out = "(" + atom(fn.name);
    for (const auto& a : fn.args) out += " " + atom(a);
    return out + ")";
}

}  // namespace

std::string to_text(const PlanExpr& e) {
    auto all_inputs = [&] {
        std::string out;
        for (const auto& child : e.inputs) out += " " + to_text(child);
        return out;
    };
    return std::visit(
        overloaded{
            [&](const op::Source& s) {
                return plain_symbol(s.name) ? s.name : "(source " + quote(s.name) + ")";
            },
            [&](const op::Select& s) { return "(select " + to_text(s.predicate) + all_inputs() + ")"; },
            [&](const op::Project& p) {
                std::string attrs;
                for (std::size_t i = 0; i < p.attrs.size(); ++i) attrs += (i ? " " : "") + atom(p.attrs[i]);
                return std::string("(project ") + (p.distinct ? "distinct " : "") + "(" + attrs + ")" + all_inputs() +
                       ")";
            },
            [&](const op::Coarsen& c) {
                std::string width = c.width.unit == Width::Unit::days
                                        ? std::to_string(c.width.amount)
                                        : "(months " + std::to_string(c.width.amount) + ")";
                return "(coarsen " + width + window_text(c.start, c.end) + all_inputs() + ")";
            },
            [&](const op::Merge&) { return "(merge" + all_inputs() + ")"; },
            [&](const op::Group& g) {
                std::string vars;
                for (std::size_t i = 0; i < g.vars.size(); ++i) vars += (i ? " " : "") + atom(g.vars[i]);
                return "(group (" + vars + ")" + all_inputs() + ")";
            },
            [&](const op::Apply& a) { return "(apply " + fn_text(a.fn) + all_inputs() + ")"; },
            [&](const op::ApplyArg& a) { return "(applyArg " + fn_text(a.fn) + all_inputs() + ")"; },
            [&](const op::Sort& s) {
                return std::string("(sort ") + (s.axis == SortAxis::count ? "count" : "term") +
                       (s.order == SortOrder::desc ? " desc" : " asc") + all_inputs() + ")";
            },
            [&](const op::Top& t) {
                return "(top " + std::to_string(t.k) + (t.distinct ? " :distinct " + atom(*t.distinct) : "") +
                       all_inputs() + ")";
            },
            [&](const op::Collapse& c) { return "(collapse " + std::string(to_string(c.axis)) + all_inputs() + ")"; },
            [&](const op::Distance& d) {
                return "(distance " + std::string(to_string(d.metric)) + all_inputs() + ")";
            },
            [&](const op::IndexOp& o) { return "(indexOp " + std::string(to_string(o.kind)) + all_inputs() + ")"; },
            [&](const op::QueryIndex& q) { return "(queryIndex" + window_text(q.start, q.end) + all_inputs() + ")"; },
            [&](const op::ExtractAxis& x) {
                return "(extractAxis " + std::string(to_string(x.axis)) + all_inputs() + ")";
            },
            [&](const op::GetRecords&) { return "(getRecords" + all_inputs() + ")"; },
            [&](const op::Docs& d) {
                std::string out = "(docs";
                for (auto id : d.docs) out += " " + std::to_string(id);
                return out + ")";
            },
            [&](const op::DocsOf&) { return "(docsOf" + all_inputs() + ")"; },
        },
        e.op);
}

namespace {

struct Form {
    const SExpr* whole = nullptr;
    std::string head;
    std::vector<const SExpr*> args;               // positional, after the head
    std::map<std::string, const SExpr*> options;  // :key value
};

Form split_form(const SExpr& e) {
    Form f;
    f.whole = &e;
    f.head = e.items[0].text;
    for (std::size_t i = 1; i < e.items.size(); ++i) {
        const SExpr& item = e.items[i];
        if (item.kind == SExpr::Kind::symbol && item.text.size() > 1 && item.text.front() == ':') {
            if (i + 1 >= e.items.size()) syntax_error(item, "option " + item.text + " has no value");
            if (!f.options.emplace(item.text.substr(1), &e.items[i + 1]).second) {
                syntax_error(item, "duplicate option " + item.text);
            }
            ++i;
        } else {
            f.args.push_back(&item);
        }
    }
    return f;
}

std::string text_of(const SExpr& e) {
    if (e.kind == SExpr::Kind::list) syntax_error(e, "expected an atom");
    return e.text;
}

std::string symbol_of(const SExpr& e) {
    if (e.kind != SExpr::Kind::symbol) syntax_error(e, "expected a name");
    return e.text;
}

std::vector<std::string> name_list(const SExpr& e) {
    if (!e.is_list()) syntax_error(e, "expected a parenthesized list of names");
    std::vector<std::string> out;
    for (const auto& item : e.items) out.push_back(text_of(item));
    return out;
}

std::int64_t integer_of(const SExpr& e) {
    if (e.kind != SExpr::Kind::integer) syntax_error(e, "expected an integer");
    return e.integer;
}

Date date_of(const SExpr& e) {
    try {
        return parse_iso_date(text_of(e));
    } catch (const Error&) {
        syntax_error(e, "expected an ISO date");
    }
}

PlanExpr read(const SExpr& e);

class FormReader {
public:
    explicit FormReader(const SExpr& e) : f_(split_form(e)) {}

    const std::string& head() const { return f_.head; }

    // The first `n` positional arguments are parameters; the rest are sub-plans.
    void params(std::size_t n) {
        if (f_.args.size() < n) syntax_error(*f_.whole, "'" + f_.head + "' is missing parameters");
        params_ = n;
    }
    const SExpr& param(std::size_t i) const { return *f_.args[i]; }

    std::vector<PlanExpr> inputs(std::size_t min, std::size_t max) const {
        std::size_t n = f_.args.size() - params_;
        if (n < min || n > max) {
            syntax_error(*f_.whole, "'" + f_.head + "' takes " + std::to_string(min) +
                                        (min == max ? "" : "-" + std::to_string(max)) + " input(s), got " +
                                        std::to_string(n));
        }
        std::vector<PlanExpr> out;
        for (std::size_t i = params_; i < f_.args.size(); ++i) out.push_back(read(*f_.args[i]));
        return out;
    }

    std::optional<Date> date_option(const std::string& key) {
        auto it = f_.options.find(key);
        if (it == f_.options.end()) return std::nullopt;
        used_.insert(key);
        return date_of(*it->second);
    }
    std::optional<std::string> name_option(const std::string& key) {
        auto it = f_.options.find(key);
        if (it == f_.options.end()) return std::nullopt;
        used_.insert(key);
        return text_of(*it->second);
    }
    void finish() const {
        for (const auto& [key, value] : f_.options) {
            if (!used_.contains(key)) syntax_error(*value, "'" + f_.head + "' has no option :" + key);
        }
    }

private:
    Form f_;
    std::size_t params_ = 0;
    std::set<std::string> used_;
};

PlanExpr read(const SExpr& e) {
    if (e.kind == SExpr::Kind::symbol) {
        if (e.text.front() == ':') syntax_error(e, "unexpected option " + e.text);
        return plan::source(e.text);
    }
    if (!e.is_list() || e.items.empty() || e.items[0].kind != SExpr::Kind::symbol) {
        syntax_error(e, "expected a source name or an operator form");
    }
    FormReader r(e);
    const std::string& h = r.head();
    PlanExpr out;
    if (h == "source") {
        r.params(1);
        r.inputs(0, 0);
        out = plan::source(text_of(r.param(0)));
    } else if (h == "select") {
        r.params(1);
        auto in = r.inputs(1, 1);
        out = plan::select(predicate_from_sexpr(r.param(0)), std::move(in[0]));
    } else if (h == "project") {
        bool distinct = !e.items.empty() && e.items.size() > 1 && e.items[1].is_symbol("distinct");
        r.params(distinct ? 2 : 1);
        auto in = r.inputs(1, 1);
        out = plan::project(name_list(r.param(distinct ? 1 : 0)), distinct, std::move(in[0]));
    } else if (h == "coarsen") {
        r.params(1);
        const SExpr& w = r.param(0);
        Width width;
        if (w.is_list()) {
            if (w.items.size() != 2 || !w.items[0].is_symbol("months")) syntax_error(w, "expected (months N)");
            width = Width::months(integer_of(w.items[1]));
        } else {
            width = Width::days(integer_of(w));
        }
        auto start = r.date_option("start");
        auto end = r.date_option("end");
        auto in = r.inputs(1, 1);
        out = plan::coarsen(width, std::move(in[0]), start, end);
    } else if (h == "merge") {
        auto in = r.inputs(1, 2);
        out = in.size() == 1 ? plan::merge_parts(std::move(in[0])) : plan::merge(std::move(in[0]), std::move(in[1]));
    } else if (h == "group") {
        r.params(1);
        auto in = r.inputs(1, 1);
        out = plan::group(name_list(r.param(0)), std::move(in[0]));
    } else if (h == "apply" || h == "applyArg") {
        r.params(1);
        const SExpr& f = r.param(0);
        FunctionCall call;
        if (f.is_list()) {
            if (f.items.empty()) syntax_error(f, "empty function form");
            call.name = text_of(f.items[0]);
            for (std::size_t i = 1; i < f.items.size(); ++i) call.args.push_back(text_of(f.items[i]));
        } else {
            call.name = symbol_of(f);
        }
        auto in = r.inputs(1, 1);
        out = h == "apply" ? plan::apply(std::move(call), std::move(in[0])) : plan::apply_arg(std::move(call), std::move(in[0]));
    } else if (h == "sort") {
        r.params(2);
        std::string axis = symbol_of(r.param(0));
        std::string order = symbol_of(r.param(1));
        if (axis != "count" && axis != "term") syntax_error(r.param(0), "sort axis must be count or term");
        if (order != "asc" && order != "desc") syntax_error(r.param(1), "sort order must be asc or desc");
        auto in = r.inputs(1, 1);
        out = plan::sort(axis == "count" ? SortAxis::count : SortAxis::term,
                         order == "desc" ? SortOrder::desc : SortOrder::asc, std::move(in[0]));
    } else if (h == "top") {
        r.params(1);
        std::int64_t k = integer_of(r.param(0));
        if (k < 0) syntax_error(r.param(0), "top needs k >= 0");
        auto distinct = r.name_option("distinct");
        auto in = r.inputs(1, 1);
        out = plan::top(static_cast<std::size_t>(k), std::move(in[0]), distinct);
    } else if (h == "collapse" || h == "extractAxis") {
        r.params(1);
        auto axis = axis_from_string(symbol_of(r.param(0)));
        if (!axis) syntax_error(r.param(0), "axis must be term or ts");
        auto in = r.inputs(1, 1);
        out = h == "collapse" ? plan::collapse(*axis, std::move(in[0])) : plan::extract_axis(*axis, std::move(in[0]));
    } else if (h == "distance") {
        r.params(1);
        auto metric = metric_from_string(symbol_of(r.param(0)));
        if (!metric) syntax_error(r.param(0), "metric must be euclidean or kl");
        auto in = r.inputs(2, 2);
        out = plan::distance(*metric, std::move(in[0]), std::move(in[1]));
    } else if (h == "indexOp") {
        r.params(1);
        auto kind = index_op_from_string(symbol_of(r.param(0)));
        if (!kind) syntax_error(r.param(0), "index operation must be intersect, union or difference");
        auto in = r.inputs(2, 2);
        out = plan::index_op(*kind, std::move(in[0]), std::move(in[1]));
    } else if (h == "queryIndex") {
        auto start = r.date_option("start");
        auto end = r.date_option("end");
        auto in = r.inputs(2, 2);
        out = plan::query_index(std::move(in[0]), std::move(in[1]), start, end);
    } else if (h == "getRecords") {
        auto in = r.inputs(2, 2);
        out = plan::get_records(std::move(in[0]), std::move(in[1]));
    } else if (h == "docs") {
        DocList list;
        for (std::size_t i = 1; i < e.items.size(); ++i) list.push_back(integer_of(e.items[i]));
        return plan::docs(std::move(list));
    } else if (h == "docsOf") {
        auto in = r.inputs(1, 1);
        out = plan::docs_of(std::move(in[0]));
    } else {
        syntax_error(e.items[0], "unknown plan operator '" + h + "'");
    }
    r.finish();
    return out;
}

}  // namespace

PlanExpr parse_plan(std::string_view text) { return read(parse_sexpr(text)); }

}  // namespace tth
