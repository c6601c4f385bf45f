#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "sandnet/competition.hpp"
#include "sandnet/logic.hpp"
#include "sandnet/plasticity.hpp"
#include "sandnet/snapshot.hpp"
#include "sandnet/trace.hpp"

namespace sandnet {

struct ScenarioOptions {
    std::string out_dir = ".";
    TraceFormat trace_format = TraceFormat::csv;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> config_path;
};

struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Executes scenario directives against one session. The same executor
// backs scenario files and the interactive loop, so a transcript replayed
// as a file produces the same outputs line for line. See README for the
// directive grammar.
class ScenarioRunner {
public:
    explicit ScenarioRunner(Config cfg = {}, ScenarioOptions opt = {});

    // Runs one directive. Returns printed output lines; assert failures are
    // recorded and reported, not thrown. Malformed directives throw
    // ScenarioError; runtime failures propagate std::exception.
    std::vector<std::string> execute(const std::string& line);

    std::size_t failed_asserts() const { return failures_.size(); }
    const std::vector<std::string>& failures() const { return failures_; }
    Session& session() { return session_; }
    const Session& session() const { return session_; }

private:
    Session session_;
    ScenarioOptions opt_;
    RuleBase rules_;
    std::vector<InhibitionGroup> groups_;
    bool wta_on_ = false;
    bool plasticity_on_ = false;
    std::unique_ptr<FiringHistory> history_;
    CofireCounts cofire_counts_;
    std::vector<Probe> probes_;
    std::unique_ptr<TraceWriter> tracer_;

    std::vector<std::string> last_sentence_;
    std::set<std::string> last_derived_;
    std::vector<std::string> last_recall_;
    std::vector<std::string> failures_;

    NeuronId resolve(const std::string& name) const;
    std::string name_of(NeuronId id) const;
    void step_once();
    void do_assert(const std::vector<std::string>& args);
};

// Runs a scenario file: outputs echo to `out` and into
// <out_dir>/summary.txt. Exit status: 0 ok, 1 failed asserts, 2 parse or
// runtime error.
int run_scenario_file(const std::string& path, const ScenarioOptions& opt,
                      std::ostream& out);

// Line-oriented interactive loop over the same directives; `quit` or EOF
// ends it. Errors are printed and the loop continues.
int run_repl(std::istream& in, std::ostream& out,
             const std::optional<std::string>& snapshot_path,
             const ScenarioOptions& opt);

} // namespace sandnet
