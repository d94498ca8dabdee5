export const marker = 'src/app/app.config.ts';
