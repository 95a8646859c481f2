#pragma once

#include <map>
#include <string>
#include <vector>

namespace skforge {

// The nine knowledge-injection tasks, grouped by learning objective:
// kinds 1-4 teach column semantics, 5-6 table semantics, 7-9 schema
// structure.
enum class TaskKind {
  column_from_values,          // 1: values -> column name
  value_clustering_by_column,  // 2: shuffled values -> per-column groups
  value_column_membership,     // 3: values + candidate column -> yes/no
  column_type_prediction,      // 4: column + values -> SQL type word
  table_from_row,              // 5: row -> table name
  value_clustering_by_table,   // 6: shuffled values -> per-table groups
  table_from_columns,          // 7: columns -> "cols FROM table"
  column_clustering_by_table,  // 8: shuffled columns -> per-table groups
  join_compatibility,          // 9: two tables -> yes/no
};

enum class Objective { column_semantic, table_semantic, schema };

inline constexpr TaskKind kAllTaskKinds[] = {
    TaskKind::column_from_values,          TaskKind::value_clustering_by_column,
    TaskKind::value_column_membership,     TaskKind::column_type_prediction,
    TaskKind::table_from_row,              TaskKind::value_clustering_by_table,
    TaskKind::table_from_columns,          TaskKind::column_clustering_by_table,
    TaskKind::join_compatibility,
};

Objective objective_of(TaskKind kind);
const std::string& task_kind_name(TaskKind kind);
const std::string& objective_name(Objective objective);
TaskKind task_kind_from_name(const std::string& name);  // throws DataFormatError

struct TaskTemplate {
  TaskKind task_kind = TaskKind::column_from_values;
  std::string template_id;
  std::string question_text;  // becomes the instruction
  std::string input_text;     // optional extra context block
  std::string answer_text;    // becomes the output
};

// Substitutes {name} markers from `fills` in a single pass; fill values
// are inserted verbatim and never re-scanned. Throws
// MissingPlaceholderError when the template names an absent fill.
std::string render_template(const std::string& text,
                            const std::map<std::string, std::string>& fills);

// A parsed template file. Grammar (see docs/templates.md):
//   [<task_kind>/<template_id>]
//   question: <text with {placeholders}>
//   input: <optional>
//   answer: <text>
class TemplatePack {
 public:
  static TemplatePack parse(const std::string& text);
  static TemplatePack load_file(const std::string& path);
  static TemplatePack builtin();

  const std::vector<TaskTemplate>& for_kind(TaskKind kind) const;
  // Round-robin choice; phrasing diversity without randomness.
  const TaskTemplate& pick(TaskKind kind, std::size_t counter) const;
  std::size_t size() const { return total_; }

 private:
  std::map<TaskKind, std::vector<TaskTemplate>> by_kind_;
  std::size_t total_ = 0;
};

}  // namespace skforge
