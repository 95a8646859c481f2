#include "skforge/templates.hpp"

#include <array>
#include <cctype>
#include <fstream>
#include <sstream>

#include "skforge/default_templates.inc"
#include "skforge/errors.hpp"

namespace skforge {

namespace {

struct KindInfo {
  TaskKind kind;
  const char* name;
  Objective objective;
};

constexpr std::array<KindInfo, 9> kKinds = {{
    {TaskKind::column_from_values, "column_from_values", Objective::column_semantic},
    {TaskKind::value_clustering_by_column, "value_clustering_by_column", Objective::column_semantic},
    {TaskKind::value_column_membership, "value_column_membership", Objective::column_semantic},
    {TaskKind::column_type_prediction, "column_type_prediction", Objective::column_semantic},
    {TaskKind::table_from_row, "table_from_row", Objective::table_semantic},
    {TaskKind::value_clustering_by_table, "value_clustering_by_table", Objective::table_semantic},
    {TaskKind::table_from_columns, "table_from_columns", Objective::schema},
    {TaskKind::column_clustering_by_table, "column_clustering_by_table", Objective::schema},
    {TaskKind::join_compatibility, "join_compatibility", Objective::schema},
}};

const KindInfo& info_of(TaskKind kind) {
  for (const auto& info : kKinds) {
    if (info.kind == kind) return info;
  }
  return kKinds[0];
}

}  // namespace

Objective objective_of(TaskKind kind) { return info_of(kind).objective; }

const std::string& task_kind_name(TaskKind kind) {
  static const std::array<std::string, 9> names = [] {
    std::array<std::string, 9> out;
    for (std::size_t i = 0; i < kKinds.size(); ++i) out[i] = kKinds[i].name;
    return out;
  }();
  return names[static_cast<std::size_t>(kind)];
}

const std::string& objective_name(Objective objective) {
  static const std::array<std::string, 3> names = {"column_semantic", "table_semantic",
                                                   "schema"};
  return names[static_cast<std::size_t>(objective)];
}

TaskKind task_kind_from_name(const std::string& name) {
  for (const auto& info : kKinds) {
    if (name == info.name) return info.kind;
  }
  throw DataFormatError("unknown task kind: " + name);
}

std::string render_template(const std::string& text,
                            const std::map<std::string, std::string>& fills) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '{') {
      out += text[i++];
      continue;
    }
    const std::size_t close = text.find('}', i + 1);
    bool is_marker = close != std::string::npos && close > i + 1;
    if (is_marker) {
      for (std::size_t j = i + 1; j < close; ++j) {
        const auto c = static_cast<unsigned char>(text[j]);
        if (!std::isalnum(c) && c != '_') {
          is_marker = false;
          break;
        }
      }
    }
    if (!is_marker) {
      out += text[i++];
      continue;
    }
    const std::string name = text.substr(i + 1, close - i - 1);
    const auto it = fills.find(name);
    if (it == fills.end()) throw MissingPlaceholderError(name);
    out += it->second;
    i = close + 1;
  }
  return out;
}

namespace {

std::string strip(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::string unescape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 1 < s.size() && s[i + 1] == 'n') {
      out += '\n';
      ++i;
    } else {
      out += s[i];
    }
  }
  return out;
}

}  // namespace

TemplatePack TemplatePack::parse(const std::string& text) {
  TemplatePack pack;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;

  TaskTemplate current;
  bool open = false;
  bool has_question = false, has_answer = false;

  auto flush = [&] {
    if (!open) return;
    if (!has_question || !has_answer) {
      throw DataFormatError("template '" + current.template_id +
                            "' is missing a question or answer body");
    }
    pack.by_kind_[current.task_kind].push_back(current);
    ++pack.total_;
    current = {};
    has_question = has_answer = false;
    open = false;
  };

  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = strip(line);
    if (t.empty() || t[0] == '#') continue;

    if (t.front() == '[' && t.back() == ']') {
      flush();
      const std::string header = t.substr(1, t.size() - 2);
      const auto slash = header.find('/');
      if (slash == std::string::npos) {
        throw DataFormatError("line " + std::to_string(lineno) +
                              ": template header must be [task_kind/template_id]");
      }
      current.task_kind = task_kind_from_name(strip(header.substr(0, slash)));
      current.template_id = strip(header.substr(slash + 1));
      if (current.template_id.empty()) {
        throw DataFormatError("line " + std::to_string(lineno) + ": empty template_id");
      }
      open = true;
      continue;
    }

    const auto colon = t.find(':');
    if (!open || colon == std::string::npos) {
      throw DataFormatError("line " + std::to_string(lineno) +
                            ": expected 'question:', 'input:' or 'answer:' inside a template");
    }
    const std::string key = strip(t.substr(0, colon));
    const std::string body = unescape(strip(t.substr(colon + 1)));
    if (key == "question") {
      current.question_text = body;
      has_question = true;
    } else if (key == "input") {
      current.input_text = body;
    } else if (key == "answer") {
      current.answer_text = body;
      has_answer = true;
    } else {
      throw DataFormatError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  flush();
  return pack;
}

TemplatePack TemplatePack::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFoundError(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

TemplatePack TemplatePack::builtin() { return parse(kDefaultTemplatePack); }

const std::vector<TaskTemplate>& TemplatePack::for_kind(TaskKind kind) const {
  static const std::vector<TaskTemplate> empty;
  const auto it = by_kind_.find(kind);
  return it == by_kind_.end() ? empty : it->second;
}

const TaskTemplate& TemplatePack::pick(TaskKind kind, std::size_t counter) const {
  const auto& templates = for_kind(kind);
  if (templates.empty()) {
    throw DataFormatError("template pack has no templates for kind " + task_kind_name(kind));
  }
  return templates[counter % templates.size()];
}

}  // namespace skforge
