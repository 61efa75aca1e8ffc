#include "pwb/label.hpp"

#include <algorithm>
#include <cctype>

#include "pwb/error.hpp"

namespace pwb {

struct Label::Node {
  LabelKind kind;
  std::int64_t num = 0;
  std::string text;
  std::vector<Label> kids;
  std::size_t hash = 0;
};

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

const std::shared_ptr<const Label::Node>& star_node();

}  // namespace

Label Label::make(LabelKind k, std::int64_t num, std::string text, std::vector<Label> kids) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->num = num;
  n->text = std::move(text);
  n->kids = std::move(kids);
  std::size_t h = mix(static_cast<std::size_t>(k) + 1, std::hash<std::int64_t>{}(num));
  h = mix(h, std::hash<std::string>{}(n->text));
  for (const auto& c : n->kids) h = mix(h, c.hash());
  n->hash = h;
  return Label(std::move(n));
}

namespace {
const std::shared_ptr<const Label::Node>& star_node() {
  static const std::shared_ptr<const Label::Node> n = [] {
    auto p = std::make_shared<Label::Node>();
    p->kind = LabelKind::Star;
    p->hash = 0x51ed270b27e1a9cdULL;
    return std::shared_ptr<const Label::Node>(p);
  }();
  return n;
}
}  // namespace

Label::Label() : node_(star_node()) {}

Label Label::atom(std::int64_t n) {
  if (n < 0) throw ModelError("atom labels are non-negative");
  return make(LabelKind::Atom, n, {}, {});
}

Label Label::sym(std::string_view name) {
  static const char* reserved[] = {"tt", "refl", "dep", "fam"};
  if (name.empty() || !std::isalpha(static_cast<unsigned char>(name[0])))
    throw ModelError("symbol labels start with a letter: '" + std::string(name) + "'");
  for (char c : name)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
      throw ModelError("bad symbol label '" + std::string(name) + "'");
  for (const char* r : reserved)
    if (name == r) throw ModelError("reserved symbol label '" + std::string(name) + "'");
  return make(LabelKind::Sym, 0, std::string(name), {});
}

Label Label::star() { return Label(); }

Label Label::tt() {
  static const Label t = make(LabelKind::Tt, 0, {}, {});
  return t;
}

Label Label::pair(Label a, Label b) {
  return make(LabelKind::Pair, 0, {}, {std::move(a), std::move(b)});
}

Label Label::refl(Label x) { return make(LabelKind::Refl, 0, {}, {std::move(x)}); }

static void check_sorted_keys(const std::vector<Label>& kv) {
  if (kv.size() % 2 != 0) throw ModelError("table needs key/value pairs");
  for (std::size_t i = 2; i < kv.size(); i += 2)
    if (!(kv[i - 2] < kv[i])) throw ModelError("table keys must be strictly increasing");
}

Label Label::table(std::vector<Label> kv) {
  check_sorted_keys(kv);
  return make(LabelKind::Table, 0, {}, std::move(kv));
}

Label Label::dep(std::vector<Label> kv) {
  check_sorted_keys(kv);
  return make(LabelKind::Dep, 0, {}, std::move(kv));
}

Label Label::tuple(std::vector<Label> xs) { return make(LabelKind::Tuple, 0, {}, std::move(xs)); }

Label Label::family(Label f0) { return make(LabelKind::Family, 0, {}, {std::move(f0)}); }

Label triple(const Label& a, const Label& b, const Label& w) { return Label::tuple({a, b, w}); }

LabelKind Label::kind() const { return node_->kind; }
std::int64_t Label::number() const { return node_->num; }
const std::string& Label::name() const { return node_->text; }
std::span<const Label> Label::children() const { return node_->kids; }

const Label& Label::child(std::size_t i) const {
  if (i >= node_->kids.size()) throw ModelError("label child out of range in " + str());
  return node_->kids[i];
}

std::size_t Label::hash() const { return node_->hash; }

std::size_t Label::entry_count() const { return node_->kids.size() / 2; }

const Label* Label::find(const Label& key) const {
  const auto& kids = node_->kids;
  std::size_t lo = 0, hi = kids.size() / 2;
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    auto c = kids[2 * mid] <=> key;
    if (c == 0) return &kids[2 * mid + 1];
    if (c < 0)
      lo = mid + 1;
    else
      hi = mid;
  }
  return nullptr;
}

const Label& Label::lookup(const Label& key) const {
  if (kind() != LabelKind::Table && kind() != LabelKind::Dep)
    throw ModelError("lookup on non-table label " + str());
  const Label* v = find(key);
  if (!v) throw ModelError("key " + key.str() + " not in table " + str());
  return *v;
}

bool operator==(const Label& a, const Label& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->hash != b.node_->hash) return false;
  return (a <=> b) == 0;
}

std::strong_ordering operator<=>(const Label& a, const Label& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (auto c = x.kind <=> y.kind; c != 0) return c;
  if (auto c = x.num <=> y.num; c != 0) return c;
  if (auto c = x.text.compare(y.text); c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  std::size_t n = std::min(x.kids.size(), y.kids.size());
  for (std::size_t i = 0; i < n; ++i)
    if (auto c = x.kids[i] <=> y.kids[i]; c != 0) return c;
  return x.kids.size() <=> y.kids.size();
}

void Label::write(std::string& out) const {
  const auto& n = *node_;
  auto list = [&](const char* open, const char* close) {
    out += open;
    for (std::size_t i = 0; i < n.kids.size(); ++i) {
      if (i) out += ',';
      n.kids[i].write(out);
    }
    out += close;
  };
  auto entries = [&](const char* open) {
    out += open;
    for (std::size_t i = 0; i < n.kids.size(); i += 2) {
      if (i) out += ',';
      n.kids[i].write(out);
      out += ':';
      n.kids[i + 1].write(out);
    }
    out += '}';
  };
  switch (n.kind) {
    case LabelKind::Atom: out += std::to_string(n.num); break;
    case LabelKind::Sym: out += n.text; break;
    case LabelKind::Star: out += '*'; break;
    case LabelKind::Tt: out += "tt"; break;
    case LabelKind::Pair: list("(", ")"); break;
    case LabelKind::Refl: list("refl(", ")"); break;
    case LabelKind::Table: entries("{"); break;
    case LabelKind::Dep: entries("dep{"); break;
    case LabelKind::Tuple: list("<", ">"); break;
    case LabelKind::Family: list("fam(", ")"); break;
  }
}

std::string Label::str() const {
  std::string s;
  write(s);
  return s;
}

namespace {

class LabelParser {
 public:
  explicit LabelParser(std::string_view s) : s_(s) {}

  Label parse_all() {
    Label l = parse();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing input");
    return l;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    throw ModelError("label parse error at " + std::to_string(pos_) + ": " + msg + " in '" + std::string(s_) + "'");
  }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }
  std::vector<Label> items(char close) {
    std::vector<Label> xs;
    if (eat(close)) return xs;
    do xs.push_back(parse());
    while (eat(','));
    expect(close);
    return xs;
  }
  std::vector<Label> entries() {
    std::vector<Label> kv;
    if (eat('}')) return kv;
    do {
      kv.push_back(parse());
      expect(':');
      kv.push_back(parse());
    } while (eat(','));
    expect('}');
    return kv;
  }
  Label parse() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end");
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::int64_t v = 0;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) v = v * 10 + (s_[pos_++] - '0');
      return Label::atom(v);
    }
    if (eat('*')) return Label::star();
    if (eat('(')) {
      auto xs = items(')');
      if (xs.size() != 2) fail("pairs have two components");
      return Label::pair(xs[0], xs[1]);
    }
    if (eat('<')) return Label::tuple(items('>'));
    if (eat('{')) return Label::table(entries());
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string_view word = s_.substr(start, pos_ - start);
      if (word == "tt") return Label::tt();
      if (word == "refl") {
        expect('(');
        auto xs = items(')');
        if (xs.size() != 1) fail("refl takes one argument");
        return Label::refl(xs[0]);
      }
      if (word == "fam") {
        expect('(');
        auto xs = items(')');
        if (xs.size() != 1) fail("fam takes one argument");
        return Label::family(xs[0]);
      }
      if (word == "dep") {
        expect('{');
        return Label::dep(entries());
      }
      return Label::sym(word);
    }
    fail("unexpected character");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Label Label::parse(std::string_view text) { return LabelParser(text).parse_all(); }

}  // namespace pwb
