#include "test_util.h"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

namespace sdst::testing {

std::filesystem::path temp_dir(const std::string &name) {
  auto p = std::filesystem::temp_directory_path() / ("sdst_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

std::string read_file(const std::filesystem::path &path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path &path, const std::string &text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
}

DomainSchema toy_schema() {
  DomainSchema s;
  s.domain = "toy";
  s.slots = {"area", "food", "time"};
  s.user_act_inventory = {"inform", "negate", "affirm", "dontcare"};
  s.system_act_inventory = {"request", "confirm", "inform"};
  return s;
}

Dialogue toy_dialogue(const std::string &id) {
  Dialogue d;
  d.id = id;
  d.domain = "toy";
  Turn t1;
  t1.user_tokens = tokenize("thai food at 6 pm please");
  t1.user_spans = {{"food", "thai", 0, 1}, {"time", "6 pm", 3, 5}};
  t1.user_acts = {{"inform", "food", "thai"}, {"inform", "time", "6 pm"}};
  t1.gold_state = {{"food", StateValue::value("thai")}, {"time", StateValue::value("6 pm")}};
  Turn t2;
  t2.system_tokens = tokenize("6 pm is full . how about 7 pm ?");
  t2.system_spans = {{"time", "6 pm", 0, 2}, {"time", "7 pm", 7, 9}};
  t2.system_acts = {{"inform", "time", "7 pm"}};
  t2.user_tokens = tokenize("yes , that works");
  t2.user_acts = {{"affirm", std::nullopt, std::nullopt}};
  t2.gold_state = {{"food", StateValue::value("thai")}, {"time", StateValue::value("7 pm")}};
  d.turns = {t1, t2};
  return d;
}

int run_command(const std::string &command) {
  const int status = std::system(command.c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace sdst::testing
