#include <algorithm>
#include <optional>

#include "coedit/miner.hpp"

namespace coedit {

namespace {

bool is(const Token& t, std::string_view text) { return t.text == text; }

bool is_name(const Token& t) { return t.kind == TokenKind::Identifier; }

const std::set<std::string, std::less<>> kContainerWords = {"class", "interface", "enum",
                                                             "record", "struct"};

const std::set<std::string, std::less<>> kParamModifiers = {
    "final", "ref", "out", "in", "params", "this", "scoped", "readonly"};

class Scanner {
 public:
  Scanner(const TokenSequence& file, std::string path) : t_(file.tokens), lang_(file.lang), path_(std::move(path)) {}

  std::vector<MethodDef> run() {
    scan_members(0, t_.size(), "");
    return std::move(out_);
  }

 private:
  // Index just past the group opened at `i` ("(", "[" or "{"); end if unbalanced.
  std::size_t skip_group(std::size_t i, std::size_t end) const {
    int depth = 0;
    for (; i < end; ++i) {
      const auto& s = t_[i].text;
      if (s == "(" || s == "[" || s == "{") ++depth;
      if (s == ")" || s == "]" || s == "}") {
        if (--depth == 0) return i + 1;
      }
    }
    return end;
  }

  // Walks one member scope (file, namespace or type body) in [i, end).
  void scan_members(std::size_t i, std::size_t end, const std::string& cls) {
    std::size_t header = i;
    while (i < end) {
      const auto& s = t_[i].text;
      if (s == ";" || s == "}") {
        header = ++i;
      } else if (s == "(" || s == "[") {
        i = skip_group(i, end);
      } else if (s == "{") {
        const std::size_t close = skip_group(i, end);
        on_block(header, i, close, cls);
        header = i = close;
      } else if (s == "=>" && lang_ == Lang::CSharp) {
        std::size_t j = i;
        while (j < end && !is(t_[j], ";")) {
          j = (is(t_[j], "(") || is(t_[j], "[") || is(t_[j], "{")) ? skip_group(j, end) : j + 1;
        }
        if (const auto sig = method_signature(header, i)) emit(header, std::min(j + 1, end), cls, *sig);
        header = i = std::min(j + 1, end);
      } else {
        ++i;
      }
    }
  }

  // `open` is the '{' ending the header [header, open); `close` is past '}'.
  void on_block(std::size_t header, std::size_t open, std::size_t close, const std::string& cls) {
    if (const auto container = container_at(header, open)) {
      const auto& [kind, name] = *container;
      if (kind == "namespace") {
        scan_members(open + 1, close - 1, cls);
        return;
      }
      const std::string nested = cls.empty() ? name : cls + "." + name;
      std::size_t body = open + 1;
      if (kind == "enum") {
        if (lang_ == Lang::CSharp) return;
        // Java enum constants run up to the first top-level ';'.
        std::size_t j = body;
        while (j < close - 1 && !is(t_[j], ";")) {
          j = (is(t_[j], "(") || is(t_[j], "[") || is(t_[j], "{")) ? skip_group(j, close - 1) : j + 1;
        }
        if (j >= close - 1) return;
        body = j + 1;
      }
      scan_members(body, close - 1, nested);
      return;
    }
    if (const auto sig = method_signature(header, open)) emit(header, close, cls, *sig);
  }

  std::optional<std::pair<std::string, std::string>> container_at(std::size_t b, std::size_t e) const {
    for (std::size_t i = b; i < e; ++i) {
      const auto& s = t_[i].text;
      if (s == "(" || s == "[") {
        i = skip_group(i, e) - 1;
        continue;
      }
      if (s == "=") return std::nullopt;
      if (i + 1 < e && is_name(t_[i + 1]) && (i == b || !is(t_[i - 1], "."))) {
        if (lang_ == Lang::CSharp && s == "namespace") return std::pair<std::string, std::string>{"namespace", ""};
        if (kContainerWords.count(s)) return std::pair<std::string, std::string>{s, t_[i + 1].text};
      }
    }
    return std::nullopt;
  }

  // Index of the first top-level '(' that is not an annotation argument list.
  std::optional<std::size_t> params_open(std::size_t b, std::size_t e) const {
    for (std::size_t i = b; i < e; ++i) {
      const auto& s = t_[i].text;
      if (s == "=" || s == "=>") return std::nullopt;
      if (s == "[") {
        i = skip_group(i, e) - 1;
        continue;
      }
      if (s != "(") continue;
      if (!annotation_args(b, i)) return i;
      i = skip_group(i, e) - 1;
    }
    return std::nullopt;
  }

  // True when the '(' at `open` belongs to "@a.b.Name(".
  bool annotation_args(std::size_t b, std::size_t open) const {
    std::size_t k = open;
    while (k > b && is_name(t_[k - 1])) {
      --k;
      if (k > b && is(t_[k - 1], "@")) return true;
      if (k > b && is(t_[k - 1], ".")) {
        --k;
        continue;
      }
      break;
    }
    return false;
  }

  std::optional<std::string> method_name(std::size_t b, std::size_t open) const {
    if (open == b) return std::nullopt;
    std::size_t k = open - 1;
    if (is(t_[k], ">")) {  // Foo<T>(
      int depth = 0;
      while (true) {
        if (is(t_[k], ">")) ++depth;
        if (is(t_[k], "<") && --depth == 0) break;
        if (k == b) return std::nullopt;
        --k;
      }
      if (k == b) return std::nullopt;
      --k;
    }
    if (k > b && is(t_[k - 1], "operator")) return "operator" + t_[k].text;
    if (is(t_[k], "operator")) return std::nullopt;
    if (!is_name(t_[k])) {
      return std::nullopt;
    }
    if (k > b && is(t_[k - 1], "~")) return "~" + t_[k].text;
    // "new Foo(" and "return x(" are expressions, not declarations.
    if (k > b && (is(t_[k - 1], "new") || is(t_[k - 1], "return") || is(t_[k - 1], "."))) {
      return std::nullopt;
    }
    return t_[k].text;
  }

  std::optional<std::string> method_signature(std::size_t b, std::size_t e) const {
    const auto open = params_open(b, e);
    if (!open) return std::nullopt;
    const auto name = method_name(b, *open);
    if (!name) return std::nullopt;
    const std::size_t close = skip_group(*open, e);
    if (close > e || !is(t_[close - 1], ")")) return std::nullopt;

    std::string sig = *name + "(";
    std::size_t start = *open + 1;
    int depth = 0;
    bool first = true;
    for (std::size_t i = start; i < close; ++i) {
      const auto& s = t_[i].text;
      const bool last = i + 1 == close;
      if (s == "(" || s == "[" || s == "{" || s == "<") ++depth;
      if ((s == ")" || s == "]" || s == "}" || s == ">") && !last) --depth;
      if ((s == "," && depth == 0) || last) {
        if (i > start) {
          if (!first) sig += ",";
          sig += param_type(start, i);
          first = false;
        }
        start = i + 1;
      }
    }
    return sig + ")";
  }

  std::string param_type(std::size_t b, std::size_t e) const {
    std::vector<const Token*> kept;
    for (std::size_t i = b; i < e; ++i) {
      const auto& s = t_[i].text;
      if (s == "=") break;  // default value
      if (s == "@" && i + 1 < e) {
        ++i;
        while (i + 2 < e && is(t_[i + 1], ".")) i += 2;
        if (i + 1 < e && is(t_[i + 1], "(")) i = skip_group(i + 1, e) - 1;
        continue;
      }
      if (s == "[" && kept.empty()) {  // C# attribute
        i = skip_group(i, e) - 1;
        continue;
      }
      if (kParamModifiers.count(s)) continue;
      kept.push_back(&t_[i]);
    }
    if (kept.size() > 1 && is_name(*kept.back())) kept.pop_back();
    // Qualifiers are dropped so both languages name types the same way.
    std::string type;
    const auto wordy = [](const Token& t) { return is_name(t) || t.kind == TokenKind::Keyword || t.text == "?"; };
    for (std::size_t k = 0; k < kept.size(); ++k) {
      if (k + 1 < kept.size() && is_name(*kept[k]) && is(*kept[k + 1], ".")) {
        ++k;
        continue;
      }
      if (k > 0 && wordy(*kept[k - 1]) && wordy(*kept[k])) type += ' ';
      type += kept[k]->text;
    }
    return type;
  }

  void emit(std::size_t b, std::size_t e, const std::string& cls, const std::string& sig) {
    MethodDef def;
    def.identity = {path_, cls, sig};
    def.tokens.lang = lang_;
    def.tokens.tokens.assign(t_.begin() + static_cast<std::ptrdiff_t>(b),
                             t_.begin() + static_cast<std::ptrdiff_t>(e));
    out_.push_back(std::move(def));
  }

  const std::vector<Token>& t_;
  Lang lang_;
  std::string path_;
  std::vector<MethodDef> out_;
};

}  // namespace

std::string MethodIdentity::canonical() const { return file_path + "#" + class_name + "#" + signature; }

std::vector<MethodDef> scan_methods(const TokenSequence& file, const std::string& path) {
  return Scanner(file, path).run();
}

}  // namespace coedit
