export const marker = 'src/app/app.component.ts';
