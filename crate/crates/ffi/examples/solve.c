/* Generate a small counters instance, solve it and print the plan.
 *
 *   cc examples/solve.c -Iinclude -L../../target/debug -lsbfs_ffi -lm -lpthread -ldl -o solve
 */
#include <stdio.h>

#include "sbfs.h"

static int fail(const char *what) {
    const char *msg = sbfs_last_error();
    fprintf(stderr, "%s: %s\n", what, msg ? msg : "unknown error");
    return 1;
}

int main(int argc, char **argv) {
    const char *spec = argc > 1 ? argv[1] : "counters n=3";
    const char *flags = argc > 2 ? argv[2] : "--algo sa --rect lin --sampler systematic";

    SbfsProblem *problem = NULL;
    if (sbfs_problem_generate(spec, &problem) != SBFS_STATUS_OK)
        return fail("generate");

    SbfsResult *result = NULL;
    if (sbfs_solve(problem, flags, &result) != SBFS_STATUS_OK) {
        sbfs_problem_free(problem);
        return fail("solve");
    }

    printf("outcome=%d plan_len=%lld expansions=%llu reexp_rate=%.2f\n",
           (int)sbfs_result_outcome(result),
           (long long)sbfs_result_plan_len(result),
           (unsigned long long)sbfs_result_expansions(result),
           sbfs_result_reexp_rate(result));

    char *plan = NULL;
    if (sbfs_result_plan_text(result, &plan) == SBFS_STATUS_OK) {
        fputs(plan, stdout);
        sbfs_string_free(plan);
    }

    int solved = sbfs_result_outcome(result) == SBFS_OUTCOME_SOLVED;
    sbfs_result_free(result);
    sbfs_problem_free(problem);
    return solved ? 0 : 2;
}
