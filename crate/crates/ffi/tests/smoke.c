#include <stdio.h>
#include <string.h>
#include "qp_recur.h"

int run(void) {
    QpContext *ctx = NULL;
    QpNumber *x = NULL, *e = NULL, *l = NULL, *zeta = NULL, *h = NULL;
    QpProblem *problem = NULL;
    char *text = NULL, *report = NULL;
    int64_t v = 0;
    QpValuationKind kind;
    bool same = false, case1 = false;

    if (qp_context_new(5, 10, &ctx) != QP_STATUS_OK) return 1;
    if (qp_number_parse(ctx, "5/1", &x) != QP_STATUS_OK) return 2;
    if (qp_exp(x, &e) != QP_STATUS_OK) return 3;
    if (qp_log(e, &l) != QP_STATUS_OK) return 4;
    if (qp_number_equals_mod(l, x, 10, &same) != QP_STATUS_OK || !same) return 5;
    if (qp_number_format(e, &text) != QP_STATUS_OK) return 6;
    if (strcmp(text, "5^0 * [1,1,3,3,4,1,2,4,3,1]") != 0) return 7;
    if (qp_number_valuation(l, &v, &kind) != QP_STATUS_OK || v != 1 || kind != QP_VALUATION_KIND_FINITE) return 8;
    if (qp_log(x, &h) != QP_STATUS_DOMAIN || qp_last_error_message() == NULL) return 9;
    if (qp_problem_from_json("{\"p\":5,\"precision\":10,\"alpha\":{\"period\":[\"5/1\"]},"
                             "\"beta\":{\"period\":[\"0\"]},\"gamma\":{\"period\":[\"5/1\"]}}",
                             &problem) != QP_STATUS_OK) return 10;
    if (qp_check_case1(problem, 1, &case1) != QP_STATUS_OK || !case1) return 11;
    if (qp_solve(problem, 1, 10, &h) != QP_STATUS_OK) return 12;
    if (qp_solve_json(problem, 1, 10, &report) != QP_STATUS_OK) return 13;
    if (qp_solve_stationary(x, x, x, 10, &zeta) != QP_STATUS_OK) return 14;
    printf("%s\n", text);
    qp_string_free(report);
    qp_string_free(text);
    qp_number_free(zeta);
    qp_number_free(h);
    qp_problem_free(problem);
    qp_number_free(l);
    qp_number_free(e);
    qp_number_free(x);
    qp_context_free(ctx);
    return 0;
}

int main(void) {
    int code = run();
    if (code != 0) fprintf(stderr, "step %d failed: %s\n", code, qp_last_error_message());
    return code;
}
