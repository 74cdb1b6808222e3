// mgpe command-line front end. Everything goes through the C API so this
// stays a thin dispatcher; exit codes mirror mgpe_status.

#include <cstdio>
#include <cstring>

#include "mgpe/mgpe.h"

namespace {

void usage(std::FILE* out) {
  std::fprintf(out,
               "usage: mgpe <subcommand> <config.cfg>\n"
               "\n"
               "subcommands:\n"
               "  evolve       generic staged time evolution\n"
               "  groundstate  fixed-norm free-energy minimizer\n"
               "  dispersion   measured vs analytic mode frequencies\n"
               "  quench       thermal sample, dissipation pulse, free evolution\n"
               "  solitons     soliton initial data with minimum tracking\n"
               "\n"
               "exit codes: 0 ok, 2 config error, 3 numerical divergence,\n"
               "            4 I/O error, 5 fit/convergence failure\n");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc == 2 && std::strcmp(argv[1], "--version") == 0) {
    std::printf("mgpe %s\n", mgpe_version());
    return 0;
  }
  if (argc == 2 && (std::strcmp(argv[1], "--help") == 0 || std::strcmp(argv[1], "-h") == 0)) {
    usage(stdout);
    return 0;
  }
  if (argc != 3) {
    usage(stderr);
    return 2;
  }

  const char* cmd = argv[1];
  const char* cfg = argv[2];
  mgpe_status rc;
  if (std::strcmp(cmd, "evolve") == 0) {
    rc = mgpe_run_evolve(cfg);
  } else if (std::strcmp(cmd, "groundstate") == 0) {
    rc = mgpe_run_groundstate(cfg);
  } else if (std::strcmp(cmd, "dispersion") == 0) {
    rc = mgpe_run_dispersion(cfg);
  } else if (std::strcmp(cmd, "quench") == 0) {
    rc = mgpe_run_quench(cfg);
  } else if (std::strcmp(cmd, "solitons") == 0) {
    rc = mgpe_run_solitons(cfg);
  } else {
    std::fprintf(stderr, "mgpe: unknown subcommand '%s'\n", cmd);
    usage(stderr);
    return 2;
  }

  if (rc != MGPE_OK) {
    std::fprintf(stderr, "mgpe %s: error (%d): %s\n", cmd, static_cast<int>(rc),
                 mgpe_last_error());
    if (rc == MGPE_ERR_IO || rc == MGPE_ERR_DIVERGENCE) {
      std::fprintf(stderr,
                   "mgpe %s: note: artifacts already written to the output "
                   "directory are partial\n",
                   cmd);
    }
    // Argument-kind failures from the API surface as config problems here.
    return rc == MGPE_ERR_ARGUMENT ? 2 : static_cast<int>(rc);
  }
  return 0;
}
