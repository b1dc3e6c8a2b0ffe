import { defineConfig } from 'vitest/config';

export default defineConfig({
  test: {
    environment: 'node',
    include: ['tests/**/*.test.ts'],
    testTimeout: 30000,
    hookTimeout: 40000,
    // the integration suite drives one shared session sequentially
    fileParallelism: false,
    sequence: { shuffle: false },
  },
});
