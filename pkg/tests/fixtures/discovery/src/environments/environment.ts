export const marker = 'src/environments/environment.ts';
