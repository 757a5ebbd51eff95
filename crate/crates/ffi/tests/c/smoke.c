#include <math.h>
#include <stdio.h>
#include "chirp_papr.h"

int main(void) {
    enum { N = 64 };
    CpComplex x[N], s[N], back[N];
    for (int i = 0; i < N; i++) {
        x[i].re = (i % 3 == 0) ? 0.70710678118654752 : -0.70710678118654752;
        x[i].im = (i % 5 < 2) ? 0.70710678118654752 : -0.70710678118654752;
    }
    CpTransmitter *t = NULL;
    if (cp_transmitter_new(CP_SPREADING_INTERLEAVED_DFT, 0, CP_WAVEFORM_AFDM, N, 0.1, 0.2, &t) != CP_STATUS_OK)
        return 1;
    if (cp_transmitter_transmit(t, x, s, N) != CP_STATUS_OK) return 2;
    if (cp_transmitter_receive(t, s, back, N) != CP_STATUS_OK) return 3;
    cp_transmitter_free(t);
    for (int i = 0; i < N; i++)
        if (fabs(back[i].re - x[i].re) > 1e-9 || fabs(back[i].im - x[i].im) > 1e-9) return 4;

    CpModulator *m = NULL;
    if (cp_modulator_new(CP_WAVEFORM_OCDM, 15, 0, 0, &m) != CP_STATUS_INVALID_ARGUMENT) return 5;
    char msg[128];
    if (cp_last_error_message(msg, sizeof msg) == 0) return 6;

    double db = -1;
    if (cp_papr_db(s, N, &db) != CP_STATUS_OK || !(db > 0)) return 7;
    printf("ok %.3f\n", db);
    return 0;
}
