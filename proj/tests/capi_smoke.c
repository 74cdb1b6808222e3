/* Compiled as C: proves the public header is C-clean and the shared library
 * links from plain C. */
#include <stdio.h>
#include <string.h>

#include "mgpe/mgpe.h"

int main(void) {
  if (mgpe_version() == NULL || strlen(mgpe_version()) == 0) {
    fprintf(stderr, "missing version string\n");
    return 1;
  }

  mgpe_grid* grid = NULL;
  if (mgpe_grid_create(64, 1.0, &grid) != MGPE_OK) {
    fprintf(stderr, "grid_create failed: %s\n", mgpe_last_error());
    return 1;
  }
  mgpe_field* field = NULL;
  if (mgpe_state_uniform(grid, &field) != MGPE_OK) {
    fprintf(stderr, "state_uniform failed: %s\n", mgpe_last_error());
    return 1;
  }
  double norm = 0.0;
  if (mgpe_field_norm_sq(field, &norm) != MGPE_OK || norm < 0.999999 ||
      norm > 1.000001) {
    fprintf(stderr, "bad norm %f\n", norm);
    return 1;
  }
  mgpe_field_destroy(field);
  mgpe_grid_destroy(grid);
  printf("mgpe C smoke ok (version %s)\n", mgpe_version());
  return 0;
}
