#include "tth/sexpr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

#include "tth/error.hpp"

namespace tth {

namespace {

class Reader {
public:
    explicit Reader(std::string_view text) : text_(text) {}

    SExpr read_one() {
        skip();
        SExpr e = read();
        skip();
        if (pos_ != text_.size()) {
            fail(ErrorKind::syntax, "unexpected trailing input at offset " + std::to_string(pos_));
        }
        return e;
    }

private:
    void skip() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else if (c == ';') {
                while (pos_ < text_.size() && text_[pos_] != '\n') {
                    ++pos_;
                }
            } else {
                break;
            }
        }
    }

    SExpr read() {
        if (pos_ >= text_.size()) {
            fail(ErrorKind::syntax, "unexpected end of input");
        }
        SExpr e;
        e.offset = pos_;
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            e.kind = SExpr::Kind::list;
            for (;;) {
                skip();
                if (pos_ >= text_.size()) {
                    fail(ErrorKind::syntax, "unclosed '(' at offset " + std::to_string(e.offset));
                }
                if (text_[pos_] == ')') {
                    ++pos_;
                    return e;
                }
                e.items.push_back(read());
            }
        }
        if (c == ')') {
            fail(ErrorKind::syntax, "unexpected ')' at offset " + std::to_string(pos_));
        }
        if (c == '"') {
            ++pos_;
            e.kind = SExpr::Kind::string;
            for (;;) {
                if (pos_ >= text_.size()) {
                    fail(ErrorKind::syntax, "unterminated string at offset " + std::to_string(e.offset));
                }
                char s = text_[pos_++];
                if (s == '"') {
                    return e;
                }
                if (s == '\\') {
                    if (pos_ >= text_.size()) {
                        fail(ErrorKind::syntax, "unterminated string at offset " + std::to_string(e.offset));
                    }
                    char n = text_[pos_++];
                    e.text += n == 'n' ? '\n' : n == 't' ? '\t' : n;
                } else {
                    e.text += s;
                }
            }
        }
        std::size_t start = pos_;
        while (pos_ < text_.size()) {
            char s = text_[pos_];
            if (std::isspace(static_cast<unsigned char>(s)) || s == '(' || s == ')' || s == '"' || s == ';') {
                break;
            }
            ++pos_;
        }
        e.text = std::string(text_.substr(start, pos_ - start));
        classify(e);
        return e;
    }

    static void classify(SExpr& e) {
        const char* first = e.text.data();
        const char* last = e.text.data() + e.text.size();
        std::int64_t i = 0;
        if (auto [p, ec] = std::from_chars(first, last, i); ec == std::errc{} && p == last) {
            e.kind = SExpr::Kind::integer;
            e.integer = i;
            return;
        }
        double d = 0;
        if (auto [p, ec] = std::from_chars(first, last, d); ec == std::errc{} && p == last && std::isfinite(d)) {
            e.kind = SExpr::Kind::real;
            e.real = d;
            return;
        }
        e.kind = SExpr::Kind::symbol;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

SExpr parse_sexpr(std::string_view text) { return Reader(text).read_one(); }

std::string quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') {
            out += '\\';
            out += c;
        } else if (c == '\n') {
            out += "\\n";
        } else if (c == '\t') {
            out += "\\t";
        } else {
            out += c;
        }
    }
    return out + "\"";
}

std::string format_number(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, p);
}

void syntax_error(const SExpr& at, const std::string& message) {
    fail(ErrorKind::syntax, message + " (at offset " + std::to_string(at.offset) + ")");
}

}  // namespace tth
