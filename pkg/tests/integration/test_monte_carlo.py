from sim.reorientation import run_monte_carlo

TRIALS = 100
REQUIRED_SUCCESSES = 95


def test_noisy_batch_reaches_goal(init_config):
    # Given: gyro and accelerometer noise on every trial
    simulation = init_config.simulation.model_copy(update={"gyro_noise_std": 0.02, "accel_noise_std": 0.2})
    config = init_config.model_copy(update={"simulation": simulation})

    # When
    summary = run_monte_carlo(config, list(range(TRIALS)))

    # Then
    assert len(summary.trials) == TRIALS
    assert [trial.seed for trial in summary.trials] == list(range(TRIALS))
    assert summary.success_count >= REQUIRED_SUCCESSES
